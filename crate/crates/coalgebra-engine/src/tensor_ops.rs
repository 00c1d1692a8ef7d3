use exact_linear::{Matrix, Rat, Vector};

/// Column-major adjacency of a sparse matrix: `cols[j]` lists `(row, coeff)`
/// pairs. Streamed single-factor applications read columns, so the row-major
/// store is transposed once up front.
pub(crate) fn columns_of(m: &Matrix) -> Vec<Vec<(usize, Rat)>> {
    let mut cols: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); m.cols()];
    for (r, c, v) in m.entries() {
        cols[c].push((r, v.clone()));
    }
    cols
}

/// Applies `op` (given by columns, mapping a `first_dim`-dimensional space to
/// an `op_rows`-dimensional one) to the leftmost tensor factor of `w`, whose
/// flat dimension must be divisible by `first_dim`. The remaining factors are
/// untouched; nothing of size `op (x) id` is ever built.
pub(crate) fn apply_on_first_factor(
    op_cols: &[Vec<(usize, Rat)>],
    op_rows: usize,
    w: &Vector,
    first_dim: usize,
) -> Vector {
    assert_eq!(w.dim() % first_dim, 0, "first factor does not divide");
    assert_eq!(op_cols.len(), first_dim, "operator input dimension mismatch");
    let rest = w.dim() / first_dim;
    let mut out = Vector::zero(op_rows * rest);
    for (idx, coeff) in w.iter() {
        let (i, r) = (idx / rest, idx % rest);
        for (o, x) in &op_cols[i] {
            out.add_to(o * rest + r, &(coeff * x));
        }
    }
    out
}

/// Applies a square operator to tensor factor `pos` of `w`, where `w` lives
/// in a tensor product with the given factor dimensions (leftmost most
/// significant).
pub(crate) fn apply_on_factor(
    op_cols: &[Vec<(usize, Rat)>],
    op_rows: usize,
    w: &Vector,
    dims: &[usize],
    pos: usize,
) -> Vector {
    let d = dims[pos];
    assert_eq!(op_cols.len(), d, "operator input dimension mismatch");
    let stride: usize = dims[pos + 1..].iter().product();
    let out_dim = w.dim() / d * op_rows;
    let mut out = Vector::zero(out_dim);
    for (idx, coeff) in w.iter() {
        let i = (idx / stride) % d;
        let low = idx % stride;
        let high = idx / (stride * d);
        for (o, x) in &op_cols[i] {
            // Output strides change with op_rows replacing d at pos.
            out.add_to(high * (op_rows * stride) + o * stride + low, &(coeff * x));
        }
    }
    out
}

/// The flip `M1 (x) M2 -> M2 (x) M1` as a permutation matrix: basis vector
/// at flat index `i*d2 + j` is sent to `j*d1 + i`.
pub fn factor_swap(d1: usize, d2: usize) -> Matrix {
    let mut m = Matrix::zeros(d1 * d2, d1 * d2);
    for i in 0..d1 {
        for j in 0..d2 {
            m.set(j * d1 + i, i * d2 + j, Rat::one());
        }
    }
    m
}

/// Permutation matrix reordering tensor factors: output factor `p` carries
/// input factor `perm[p]`. `dims` lists the input factor dimensions leftmost
/// first; `perm` must be a permutation of `0..dims.len()`.
pub fn tensor_factor_permutation(dims: &[usize], perm: &[usize]) -> Matrix {
    assert_eq!(dims.len(), perm.len(), "permutation length mismatch");
    let mut seen = vec![false; dims.len()];
    for &p in perm {
        assert!(p < dims.len() && !seen[p], "not a permutation");
        seen[p] = true;
    }
    let total: usize = dims.iter().product();
    let n = dims.len();
    // Input strides, leftmost most significant.
    let mut in_stride = vec![1usize; n];
    for t in (0..n.saturating_sub(1)).rev() {
        in_stride[t] = in_stride[t + 1] * dims[t + 1];
    }
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut out_stride = vec![1usize; n];
    for t in (0..n.saturating_sub(1)).rev() {
        out_stride[t] = out_stride[t + 1] * out_dims[t + 1];
    }
    let mut m = Matrix::zeros(total, total);
    for idx in 0..total {
        let mut digits = vec![0usize; n];
        for t in 0..n {
            digits[t] = (idx / in_stride[t]) % dims[t];
        }
        let mut out_idx = 0;
        for t in 0..n {
            out_idx += digits[perm[t]] * out_stride[t];
        }
        m.set(out_idx, idx, Rat::one());
    }
    m
}

/// A vector as a single-column matrix.
pub(crate) fn col_matrix(v: &Vector) -> Matrix {
    let mut m = Matrix::zeros(v.dim(), 1);
    for (i, c) in v.iter() {
        m.set(i, 0, c.clone());
    }
    m
}
