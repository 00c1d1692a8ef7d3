use exact_linear::Rat;
use std::collections::BTreeMap;

/// Sparse comultiplication of one basis key: pairs of keys with coefficients.
type ComultRule<K> = Box<dyn Fn(&K) -> Vec<((K, K), Rat)> + Send + Sync>;
type CounitRule<K> = Box<dyn Fn(&K) -> Rat + Send + Sync>;

/// A coalgebra on a basis too large to materialize: comultiplication and
/// counit are procedures evaluated on basis keys and extended linearly.
/// The procedures must be pure; they are shared immutably.
pub struct LazyCoalgebra<K: Ord + Clone> {
    comult: ComultRule<K>,
    counit: CounitRule<K>,
}

impl<K: Ord + Clone> LazyCoalgebra<K> {
    pub fn new(
        comult: impl Fn(&K) -> Vec<((K, K), Rat)> + Send + Sync + 'static,
        counit: impl Fn(&K) -> Rat + Send + Sync + 'static,
    ) -> Self {
        LazyCoalgebra { comult: Box::new(comult), counit: Box::new(counit) }
    }

    pub fn comult_of_key(&self, k: &K) -> Vec<((K, K), Rat)> {
        (self.comult)(k)
    }

    pub fn counit_of_key(&self, k: &K) -> Rat {
        (self.counit)(k)
    }

    pub fn counit_of(&self, x: &LazyElement<K>) -> Rat {
        let mut total = Rat::zero();
        for (k, c) in &x.terms {
            total = &total + &(c * &(self.counit)(k));
        }
        total
    }

    pub fn comult_of(&self, x: &LazyElement<K>) -> LazyTensor<K> {
        let mut out = LazyTensor::zero(2);
        for (k, c) in &x.terms {
            for ((a, b), q) in (self.comult)(k) {
                out.add(vec![a, b], &(c * &q));
            }
        }
        out
    }

    /// Spot-verification of the axioms on a single basis key: both counit
    /// identities and coassociativity, expanded sparsely.
    pub fn axioms_hold_at(&self, k: &K) -> bool {
        let dk = (self.comult)(k);

        let mut left = LazyElement::zero();
        let mut right = LazyElement::zero();
        for ((a, b), q) in &dk {
            left.add(b.clone(), &(q * &(self.counit)(a)));
            right.add(a.clone(), &(q * &(self.counit)(b)));
        }
        let point = LazyElement::point(k.clone());
        if left != point || right != point {
            return false;
        }

        let mut lhs = LazyTensor::zero(3);
        let mut rhs = LazyTensor::zero(3);
        for ((a, b), q) in &dk {
            for ((a1, a2), q1) in (self.comult)(a) {
                lhs.add(vec![a1, a2, b.clone()], &(q * &q1));
            }
            for ((b1, b2), q2) in (self.comult)(b) {
                rhs.add(vec![a.clone(), b1, b2], &(q * &q2));
            }
        }
        lhs == rhs
    }
}

/// Sparse formal rational combination of basis keys. No zero coefficients
/// are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LazyElement<K: Ord + Clone> {
    terms: BTreeMap<K, Rat>,
}

impl<K: Ord + Clone> LazyElement<K> {
    pub fn zero() -> Self {
        LazyElement { terms: BTreeMap::new() }
    }

    pub fn point(k: K) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(k, Rat::one());
        LazyElement { terms }
    }

    pub fn from_terms(terms: Vec<(K, Rat)>) -> Self {
        let mut out = LazyElement::zero();
        for (k, c) in terms {
            out.add(k, &c);
        }
        out
    }

    pub fn add(&mut self, k: K, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let updated = e.get() + c;
                if updated.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = updated;
                }
            }
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add(k.clone(), c);
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add(k.clone(), &-c);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return LazyElement::zero();
        }
        LazyElement { terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &Rat)> {
        self.terms.iter()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }
}

/// Sparse element of a fixed tensor power: keys are words of basis keys of
/// the declared length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LazyTensor<K: Ord + Clone> {
    factors: usize,
    terms: BTreeMap<Vec<K>, Rat>,
}

impl<K: Ord + Clone> LazyTensor<K> {
    pub fn zero(factors: usize) -> Self {
        LazyTensor { factors, terms: BTreeMap::new() }
    }

    pub fn add(&mut self, word: Vec<K>, c: &Rat) {
        assert_eq!(word.len(), self.factors, "tensor word has the wrong length");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(word);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let updated = e.get() + c;
                if updated.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = updated;
                }
            }
        }
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<K>, &Rat)> {
        self.terms.iter()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    /// Tensor power of a single element: all words from the supports, with
    /// product coefficients.
    pub fn power_of(x: &LazyElement<K>, factors: usize) -> Self {
        let mut out = LazyTensor::zero(factors);
        if factors == 0 {
            out.add(Vec::new(), &Rat::one());
            return out;
        }
        let mut words: Vec<(Vec<K>, Rat)> = vec![(Vec::new(), Rat::one())];
        for _ in 0..factors {
            let mut next = Vec::with_capacity(words.len() * x.terms.len());
            for (w, c) in &words {
                for (k, q) in &x.terms {
                    let mut ww = w.clone();
                    ww.push(k.clone());
                    next.push((ww, c * q));
                }
            }
            words = next;
        }
        for (w, c) in words {
            out.add(w, &c);
        }
        out
    }
}

/// True iff `delta(u) = u (x) u` and `eps(u) = 1`, evaluated sparsely.
pub fn lazy_is_unit<K: Ord + Clone>(lc: &LazyCoalgebra<K>, u: &LazyElement<K>) -> bool {
    lc.counit_of(u).is_one() && lc.comult_of(u) == LazyTensor::power_of(u, 2)
}

/// Iterated reduced comultiplication evaluated on one element: start from
/// the projection `x - eps(x) u` and repeatedly expand the reduced
/// comultiplication on the leftmost factor, where on a basis key
/// `deltabar[y] = delta[y] - u (x) [y] - [y] (x) u + eps(y) u (x) u`
/// (the linear extension of the matrix formula, using `delta(u) = u (x) u`).
pub fn lazy_iterated_reduced_comult<K: Ord + Clone>(
    lc: &LazyCoalgebra<K>,
    u: &LazyElement<K>,
    x: &LazyElement<K>,
    k: usize,
) -> LazyTensor<K> {
    let eps_x = lc.counit_of(x);
    let projected = x.minus(&u.scale(&eps_x));

    let mut current = LazyTensor::zero(1);
    for (key, c) in projected.terms() {
        current.add(vec![key.clone()], c);
    }

    for _ in 0..k {
        let mut next = LazyTensor::zero(current.factors() + 1);
        for (word, c) in current.terms() {
            let y = &word[0];
            let rest = &word[1..];
            let eps_y = lc.counit_of_key(y);

            for ((a, b), q) in lc.comult_of_key(y) {
                let mut w = Vec::with_capacity(word.len() + 1);
                w.push(a);
                w.push(b);
                w.extend_from_slice(rest);
                next.add(w, &(c * &q));
            }
            for (z, cz) in u.terms() {
                let mut w = Vec::with_capacity(word.len() + 1);
                w.push(z.clone());
                w.push(y.clone());
                w.extend_from_slice(rest);
                next.add(w, &-&(c * cz));

                let mut w = Vec::with_capacity(word.len() + 1);
                w.push(y.clone());
                w.push(z.clone());
                w.extend_from_slice(rest);
                next.add(w, &-&(c * cz));
            }
            if !eps_y.is_zero() {
                for (z1, c1) in u.terms() {
                    for (z2, c2) in u.terms() {
                        let mut w = Vec::with_capacity(word.len() + 1);
                        w.push(z1.clone());
                        w.push(z2.clone());
                        w.extend_from_slice(rest);
                        next.add(w, &(&(c * &eps_y) * &(c1 * c2)));
                    }
                }
            }
        }
        current = next;
    }
    current
}
