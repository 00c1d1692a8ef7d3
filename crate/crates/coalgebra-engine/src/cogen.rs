use crate::coalgebra::{check_axioms, Coalgebra, UnitElement};
use crate::space::GradedSpace;
use crate::tensor_ops::{apply_on_factor, apply_on_first_factor, columns_of};
use crate::{CoalgError, TensorCap};
use exact_linear::{binomial, factorial, Matrix, Rat, Subspace, Vector};
use std::collections::BTreeMap;

/// Monomial basis of the truncated symmetric algebra on `gens` generators,
/// all exponent vectors of total degree at most `bound`. Ordered by degree,
/// then by descending lexicographic exponent tuple, so for two generators
/// the degree-2 block reads a^2, ab, b^2.
#[derive(Debug, Clone)]
pub struct SymBasis {
    gens: usize,
    bound: usize,
    exponents: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
}

fn compositions_desc(total: u32, parts: usize, out: &mut Vec<Vec<u32>>, prefix: &mut Vec<u32>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions_desc(total - first, parts - 1, out, prefix);
        prefix.pop();
    }
}

impl SymBasis {
    pub fn new(gens: usize, bound: usize) -> Self {
        assert!(gens >= 1, "need at least one generator");
        let mut exponents = Vec::new();
        for degree in 0..=bound as u32 {
            compositions_desc(degree, gens, &mut exponents, &mut Vec::new());
        }
        let index = exponents.iter().cloned().zip(0..).collect();
        SymBasis { gens, bound, exponents, index }
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    pub fn index_of(&self, alpha: &[u32]) -> Option<usize> {
        self.index.get(alpha).copied()
    }

    pub fn degree_of(&self, i: usize) -> u32 {
        self.exponents[i].iter().sum()
    }

    /// Monomial rendered with the given generator labels; the empty monomial
    /// is named by `unit_label`.
    pub fn label(&self, gen_labels: &[&str], i: usize, unit_label: &str) -> String {
        let alpha = &self.exponents[i];
        let mut parts = Vec::new();
        for (g, &e) in alpha.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(gen_labels[g].to_string()),
                _ => parts.push(format!("{}^{}", gen_labels[g], e)),
            }
        }
        if parts.is_empty() {
            unit_label.to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Words of length 0..=n over `gens` letters, ordered by length and then by
/// counting order (which is ascending lexicographic within a length). The
/// flat index of a length-j word is the block offset plus its base-`gens`
/// value, a fact the cogeneration assembly relies on.
fn word_blocks(gens: usize, n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut blocks = Vec::with_capacity(n + 1);
    blocks.push(vec![Vec::new()]);
    for _ in 1..=n {
        let prev: &Vec<Vec<usize>> = blocks.last().expect("non-empty");
        let mut next = Vec::with_capacity(prev.len() * gens);
        for w in prev {
            for letter in 0..gens {
                let mut ww = w.clone();
                ww.push(letter);
                next.push(ww);
            }
        }
        blocks.push(next);
    }
    blocks
}

/// Truncated tensor coalgebra `T^{<=n}N` on the basis of the given space:
/// words of length at most n, graded by length, with the deconcatenation
/// coproduct and the empty word as unit. Not cocommutative once N has two
/// or more dimensions.
pub fn truncated_tensor_coalg(
    n_space: &GradedSpace,
    n: usize,
    cap: TensorCap,
) -> Result<(Coalgebra, UnitElement), CoalgError> {
    let gens = n_space.total_dim();
    let gen_labels = n_space.labels();
    let blocks = word_blocks(gens, n);
    let dim: usize = blocks.iter().map(|b| b.len()).sum();
    cap.admit(dim * dim, dim)?;

    let mut labels_by_grade = Vec::with_capacity(n + 1);
    let mut words_flat = Vec::with_capacity(dim);
    for (j, block) in blocks.iter().enumerate() {
        let labels: Vec<String> = block
            .iter()
            .map(|w| {
                if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter().map(|&l| gen_labels[l]).collect::<Vec<_>>().join("|")
                }
            })
            .collect();
        labels_by_grade.push((j, labels));
        words_flat.extend(block.iter().cloned());
    }
    let space = GradedSpace::new(labels_by_grade)?;

    let mut word_index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (i, w) in words_flat.iter().enumerate() {
        word_index.insert(w.clone(), i);
    }

    let mut comult = Matrix::zeros(dim * dim, dim);
    for (i, w) in words_flat.iter().enumerate() {
        for cut in 0..=w.len() {
            let prefix = word_index[&w[..cut].to_vec()];
            let suffix = word_index[&w[cut..].to_vec()];
            comult.add_to(prefix * dim + suffix, i, &Rat::one());
        }
    }
    let mut counit = Matrix::zeros(1, dim);
    counit.set(0, 0, Rat::one());

    let coalg = Coalgebra::new(space, comult, counit)?;
    let unit = UnitElement::validated(&coalg, Vector::unit(dim, 0))?;
    Ok((coalg, unit))
}

/// Truncated symmetric coalgebra `Sym^{<=n}N` on the monomial basis, graded
/// by degree, with the binomial coproduct
/// `Delta(x^alpha) = sum over beta <= alpha of prod C(alpha_i, beta_i)
/// x^beta (x) x^(alpha-beta)` and the empty monomial as unit.
pub fn truncated_sym_coalg(
    n_space: &GradedSpace,
    n: usize,
    cap: TensorCap,
) -> Result<(Coalgebra, UnitElement), CoalgError> {
    let gens = n_space.total_dim();
    let gen_labels = n_space.labels();
    let basis = SymBasis::new(gens, n);
    let dim = basis.dim();
    cap.admit(dim * dim, dim)?;

    let mut labels_by_grade: Vec<(usize, Vec<String>)> = Vec::new();
    for (i, _) in basis.exponents().iter().enumerate() {
        let degree = basis.degree_of(i) as usize;
        let label = basis.label(&gen_labels, i, "1");
        match labels_by_grade.last_mut() {
            Some((g, ls)) if *g == degree => ls.push(label),
            _ => labels_by_grade.push((degree, vec![label])),
        }
    }
    let space = GradedSpace::new(labels_by_grade)?;

    let mut comult = Matrix::zeros(dim * dim, dim);
    for (i, alpha) in basis.exponents().iter().enumerate() {
        let mut beta = vec![0u32; gens];
        loop {
            let gamma: Vec<u32> = alpha.iter().zip(&beta).map(|(a, b)| a - b).collect();
            let mut coeff = Rat::one();
            for (a, b) in alpha.iter().zip(&beta) {
                coeff = &coeff * &binomial(*a as usize, *b as usize);
            }
            let row = basis.index_of(&beta).expect("sub-exponent in basis")
                * dim
                + basis.index_of(&gamma).expect("complement in basis");
            comult.add_to(row, i, &coeff);

            // Odometer over 0 <= beta <= alpha.
            let mut pos = 0;
            loop {
                if pos == gens {
                    break;
                }
                if beta[pos] < alpha[pos] {
                    beta[pos] += 1;
                    break;
                }
                beta[pos] = 0;
                pos += 1;
            }
            if pos == gens {
                break;
            }
        }
    }
    let mut counit = Matrix::zeros(1, dim);
    counit.set(0, 0, Rat::one());

    let coalg = Coalgebra::new(space, comult, counit)?;
    let unit = UnitElement::validated(&coalg, Vector::unit(dim, 0))?;
    Ok((coalg, unit))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for slot in 0..n {
            let mut p: Vec<usize> = rest.iter().map(|&x| if x >= slot { x + 1 } else { x }).collect();
            p.insert(0, slot);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// The symmetrization embedding of the monomial model into the word model:
/// a degree-j monomial is sent to the sum over all j! position permutations
/// of its sorted word, so repeated letters contribute multiplicity. This is
/// the map that lands in the image of the symmetrizer and respects both
/// coproducts; the plain sum over distinct words does not.
#[derive(Debug)]
pub struct SymmetricEmbedding {
    pub sym: Coalgebra,
    pub sym_unit: UnitElement,
    pub tensor: Coalgebra,
    pub tensor_unit: UnitElement,
    pub map: Matrix,
    pub injective: bool,
    pub image_equals_symmetric_part: bool,
    pub is_morphism: bool,
}

impl SymmetricEmbedding {
    pub fn verified(&self) -> bool {
        self.injective && self.image_equals_symmetric_part && self.is_morphism
    }
}

/// Block-diagonal symmetrizer on the word model: averages each length block
/// over all position permutations.
fn word_symmetrizer(gens: usize, n: usize, dim: usize) -> Matrix {
    let blocks = word_blocks(gens, n);
    let mut s = Matrix::zeros(dim, dim);
    let mut offset = 0;
    for block in &blocks {
        let j = block.first().map(|w| w.len()).unwrap_or(0);
        let perms = permutations(j);
        let weight = factorial(j).recip();
        for (col, w) in block.iter().enumerate() {
            for p in &perms {
                let mut idx = 0;
                for t in 0..j {
                    idx = idx * gens + w[p[t]];
                }
                s.add_to(offset + idx, offset + col, &weight);
            }
        }
        offset += block.len();
    }
    s
}

pub fn symmetric_embedding(
    n_space: &GradedSpace,
    n: usize,
    cap: TensorCap,
) -> Result<SymmetricEmbedding, CoalgError> {
    let gens = n_space.total_dim();
    let (sym, sym_unit) = truncated_sym_coalg(n_space, n, cap)?;
    let (tensor, tensor_unit) = truncated_tensor_coalg(n_space, n, cap)?;
    let basis = SymBasis::new(gens, n);
    let dim_s = sym.dim();
    let dim_t = tensor.dim();

    let blocks = word_blocks(gens, n);
    let mut block_offset = vec![0usize; n + 2];
    for j in 0..=n {
        block_offset[j + 1] = block_offset[j] + blocks[j].len();
    }

    let mut map = Matrix::zeros(dim_t, dim_s);
    for (i, alpha) in basis.exponents().iter().enumerate() {
        let mut word = Vec::new();
        for (g, &e) in alpha.iter().enumerate() {
            for _ in 0..e {
                word.push(g);
            }
        }
        let j = word.len();
        for p in permutations(j) {
            let mut idx = 0;
            for t in 0..j {
                idx = idx * gens + word[p[t]];
            }
            map.add_to(block_offset[j] + idx, i, &Rat::one());
        }
    }

    let injective = map.rank() == dim_s;
    let image = Subspace::from_matrix(&map.transpose());
    let symmetric_part = Subspace::from_matrix(&word_symmetrizer(gens, n, dim_t).transpose());
    let image_equals_symmetric_part = image == symmetric_part;

    cap.admit(dim_t * dim_t, dim_s * dim_s)?;
    let lhs = tensor.comult() * &map;
    let rhs = &map.kronecker(&map) * sym.comult();
    let is_morphism = lhs == rhs;

    Ok(SymmetricEmbedding {
        sym,
        sym_unit,
        tensor,
        tensor_unit,
        map,
        injective,
        image_equals_symmetric_part,
        is_morphism,
    })
}

/// The truncated cogeneration map `T^{<=n}r = eps + r + r^(x)2 delta + ...`
/// into the truncated tensor coalgebra on the target of `r`, assembled block
/// by block. `split_injective` is the rank verdict (over a field, injective
/// and split injective coincide); `is_morphism` reports whether the map
/// intertwines the coproducts, which holds whenever the components beyond
/// length n vanish (in particular for graded models with top grade <= n and
/// r supported on grade 1). `image_equals_symmetric_part` compares the image
/// with the symmetrizer image inside the word model, the shape the map takes
/// on cocommutative inputs.
#[derive(Debug)]
pub struct CogenerationMap {
    pub map: Matrix,
    pub tensor: Coalgebra,
    pub tensor_unit: UnitElement,
    pub split_injective: bool,
    pub is_morphism: bool,
    pub image_equals_symmetric_part: bool,
}

pub fn cogeneration_map(
    c: &Coalgebra,
    u: &UnitElement,
    r: &Matrix,
    n: usize,
    cap: TensorCap,
) -> Result<CogenerationMap, CoalgError> {
    if n < 1 {
        return Err(CoalgError::Precondition("cogeneration needs n >= 1".into()));
    }
    let d = c.dim();
    if r.cols() != d {
        return Err(CoalgError::Shape(format!(
            "cogenerating map has {} columns, coalgebra has dimension {d}",
            r.cols()
        )));
    }
    if !crate::coalgebra::is_unit(c, u.vector()) {
        return Err(CoalgError::NotAUnit("cogeneration needs a unit for this coalgebra".into()));
    }
    let gens = r.rows();
    let target_labels: Vec<String> = (1..=gens).map(|i| format!("n{i}")).collect();
    let target_space = GradedSpace::ungraded(target_labels)?;
    let (tensor, tensor_unit) = truncated_tensor_coalg(&target_space, n, cap)?;
    let dim_t = tensor.dim();

    let rows_bound = d
        .checked_pow(n as u32)
        .ok_or(CoalgError::TensorCapExceeded { needed: usize::MAX, cap: cap.0 })?;
    cap.admit(rows_bound, d)?;

    let delta_cols = columns_of(c.comult());
    let r_cols = columns_of(r);

    let mut map = Matrix::zeros(dim_t, d);
    for m in 0..d {
        // Length-0 block: the counit.
        let eps = c.counit().get(0, m);
        if !eps.is_zero() {
            map.add_to(0, m, &eps);
        }
        // Length-j block: r applied to every factor of delta^(j-1). The
        // block starts right after the gens^(j-1)-wide previous block.
        let mut iterate = Vector::unit(d, m);
        let mut base = 1usize;
        let mut width = 1usize;
        for j in 1..=n {
            width *= gens;
            if j > 1 {
                iterate = apply_on_first_factor(&delta_cols, d * d, &iterate, d);
            }
            let mut dims = vec![d; j];
            let mut projected = iterate.clone();
            for pos in 0..j {
                projected = apply_on_factor(&r_cols, gens, &projected, &dims, pos);
                dims[pos] = gens;
            }
            // Within a length block, the word flat index is its base-gens value.
            for (idx, coeff) in projected.iter() {
                map.add_to(base + idx, m, coeff);
            }
            base += width;
        }
    }

    let split_injective = map.rank() == d;

    cap.admit(dim_t * dim_t, d * d)?;
    let lhs = tensor.comult() * &map;
    let rhs = &map.kronecker(&map) * c.comult();
    let is_morphism = lhs == rhs;

    let image = Subspace::from_matrix(&map.transpose());
    let symmetric_part =
        Subspace::from_matrix(&word_symmetrizer(gens, n, dim_t).transpose());
    let image_equals_symmetric_part = image == symmetric_part;

    debug_assert!(check_axioms(&tensor).axioms_hold());

    Ok(CogenerationMap {
        map,
        tensor,
        tensor_unit,
        split_injective,
        is_morphism,
        image_equals_symmetric_part,
    })
}
