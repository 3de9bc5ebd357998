//! Decoration types `(a_i, b_i, c_i)`, sparse rational tensors as points of
//! the associated `GL(V)`-module, their weight sets, the Hilbert-Mumford
//! function, exact group actions, and the filtration-side `mu`.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice::{dual_flag, expand_blocks, Character, OnePS, WeightedFlag};
use crate::rat::{pow_i64, rat, Rat};
use crate::{Error, Result};

/// One summand `(V^{(x) a})^{(+) b} (x) det^{-c}` of a decoration type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

/// A decoration type over a rank-`r` space, with derived values
/// `v_i = a_i - r * c_i` per component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecType {
    pub r: usize,
    pub components: Vec<Component>,
}

impl DecType {
    /// A user-supplied inhomogeneous input type: every `v_i = a_i - r c_i`
    /// must be positive. Types with negative `v` arise only internally from
    /// homogenization and are built with `new_unchecked`.
    pub fn new(r: usize, components: Vec<Component>) -> Result<Self> {
        if r == 0 || components.is_empty() {
            return Err(Error::input("decoration type needs r >= 1 and at least one component"));
        }
        let t = DecType { r, components };
        for (i, v) in t.v_values().iter().enumerate() {
            if *v <= 0 {
                return Err(Error::input(format!(
                    "component {i} has a - r*c = {v} <= 0; input types must have positive v"
                )));
            }
        }
        Ok(t)
    }

    pub fn new_unchecked(r: usize, components: Vec<Component>) -> Self {
        DecType { r, components }
    }

    pub fn v_values(&self) -> Vec<i64> {
        self.components
            .iter()
            .map(|c| c.a as i64 - self.r as i64 * c.c as i64)
            .collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        let v = self.v_values();
        v.windows(2).all(|w| w[0] == w[1])
    }
}

/// Key of a basis tensor: component index, copy index (`< b_i`), and a
/// multiindex of length `a_i` with 1-based entries in `1..=r`.
pub type TermKey = (usize, usize, Vec<u8>);

/// A nonzero point of the module attached to a decoration type, stored
/// sparsely with exact rational coefficients. Duplicate keys are merged at
/// construction and zero coefficients dropped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseTensor {
    pub dec_type: DecType,
    pub terms: BTreeMap<TermKey, Rat>,
}

impl SparseTensor {
    pub fn new(dec_type: DecType, raw_terms: Vec<(TermKey, Rat)>) -> Result<Self> {
        let mut terms: BTreeMap<TermKey, Rat> = BTreeMap::new();
        for (key, coeff) in raw_terms {
            let (comp, copy, ref mi) = key;
            let c = dec_type
                .components
                .get(comp)
                .ok_or_else(|| Error::input(format!("term references component {comp}")))?;
            if copy >= c.b as usize {
                return Err(Error::input(format!(
                    "copy index {copy} out of range for component {comp} (b = {})",
                    c.b
                )));
            }
            if mi.len() != c.a as usize {
                return Err(Error::input(format!(
                    "multiindex length {} does not match a = {} of component {comp}",
                    mi.len(),
                    c.a
                )));
            }
            if mi.iter().any(|&i| i == 0 || i as usize > dec_type.r) {
                return Err(Error::input(format!(
                    "multiindex entries must lie in 1..={}",
                    dec_type.r
                )));
            }
            *terms.entry(key).or_insert_with(Rat::zero) += coeff;
        }
        terms.retain(|_, v| !v.is_zero());
        if terms.is_empty() {
            return Err(Error::input("decoration tensor must be non-trivial"));
        }
        Ok(SparseTensor { dec_type, terms })
    }

    pub fn r(&self) -> usize {
        self.dec_type.r
    }
}

/// Weight of a basis tensor: `sum_k e_{mi_k} - c_i * (e_1 + ... + e_r)`.
pub fn weight_of_term(key: &TermKey, dec_type: &DecType) -> Character {
    let r = dec_type.r;
    let c = dec_type.components[key.0].c as i64;
    let mut coords = vec![-c; r];
    for &i in &key.2 {
        coords[i as usize - 1] += 1;
    }
    Character::new(coords)
}

/// The set of distinct torus weights present in `w`. Distinct keys are
/// distinct basis vectors, so a weight is present iff some term carries it.
pub fn state_set(w: &SparseTensor) -> BTreeSet<Character> {
    w.terms
        .keys()
        .map(|k| weight_of_term(k, &w.dec_type))
        .collect()
}

/// The Hilbert-Mumford value `mu(lambda, w) = max { <lambda, chi> }` over the
/// weights of `w`. A point is torus-unstable iff some `lambda` gives a
/// negative value.
pub fn mu(lambda: &OnePS, w: &SparseTensor) -> Result<i64> {
    let mut best: Option<i64> = None;
    for chi in state_set(w) {
        let p = crate::lattice::pairing(lambda, &chi)?;
        best = Some(best.map_or(p, |b| b.max(p)));
    }
    best.ok_or_else(|| Error::input("mu of the zero tensor is undefined"))
}

/// A rational `r x r` matrix, row-major.
pub type Matrix = Vec<Vec<Rat>>;

pub fn identity_matrix(r: usize) -> Matrix {
    (0..r)
        .map(|i| (0..r).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

/// Permutation matrix sending the original basis vector `perm[k]` (0-based)
/// to position `k`, so that a flag adapted to the sorted order becomes
/// coordinate-adapted after acting.
pub fn permutation_matrix(perm: &[usize]) -> Matrix {
    let r = perm.len();
    let mut m = vec![vec![Rat::zero(); r]; r];
    for (k, &orig) in perm.iter().enumerate() {
        m[k][orig] = Rat::one();
    }
    m
}

pub fn determinant(g: &Matrix) -> Rat {
    let n = g.len();
    let mut m: Vec<Vec<Rat>> = g.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !m[i][col].is_zero());
        let Some(p) = pivot else {
            return Rat::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &pv;
            for j in col..n {
                let sub = &f * &m[col][j];
                m[i][j] -= sub;
            }
        }
    }
    det
}

/// Exact action of an invertible rational matrix: `g` acts on each component
/// as `g^{(x) a} * det(g)^{-c}`.
pub fn act(g: &Matrix, w: &SparseTensor) -> Result<SparseTensor> {
    let r = w.r();
    if g.len() != r || g.iter().any(|row| row.len() != r) {
        return Err(Error::input("matrix dimension does not match tensor rank"));
    }
    let det = determinant(g);
    if det.is_zero() {
        return Err(Error::input("singular group element"));
    }
    let mut out: Vec<(TermKey, Rat)> = Vec::new();
    for (key, coeff) in &w.terms {
        let (comp, copy, ref mi) = *key;
        let c = w.dec_type.components[comp].c as i64;
        let base = coeff * pow_i64(&det, -c);
        // expand the product over slots: g . b_j = sum_i g[i][j] b_i
        let mut partial: Vec<(Vec<u8>, Rat)> = vec![(Vec::new(), base)];
        for &j in mi.iter() {
            let mut next = Vec::new();
            for (prefix, pc) in &partial {
                for i in 0..r {
                    let gij = &g[i][j as usize - 1];
                    if gij.is_zero() {
                        continue;
                    }
                    let mut p = prefix.clone();
                    p.push(i as u8 + 1);
                    next.push((p, pc * gij));
                }
            }
            partial = next;
        }
        for (new_mi, pc) in partial {
            out.push(((comp, copy, new_mi), pc));
        }
    }
    SparseTensor::new(w.dec_type.clone(), out)
}

/// The weight vector of a weighted filtration with the given step ranks:
/// `sum_i alpha_i * (rk_i - r, ..., rk_i, ...)`, reported one entry per
/// block. The full `r`-vector sums to zero.
pub fn gamma_vector(ranks: &[usize], alphas: &[Rat], r: usize) -> Result<Vec<Rat>> {
    let flag = WeightedFlag::new(r, ranks.to_vec(), alphas.to_vec())?;
    Ok(flag.gamma_blocks())
}

/// The filtration-side Hilbert-Mumford value of a coordinate-adapted flag
/// against a tensor, computed along two independent routes and asserted
/// equal:
///
/// * the block-minimum formula on the dual flag (sheaf side), maximized over
///   components, and
/// * the pairing of the gamma-weighted cocharacter against the term weights,
///   maximized over terms.
///
/// The caller must pre-permute `w` with the adapting permutation of
/// `weighted_flag_of` so that the flag steps are coordinate spans.
pub fn mu_filtration_tensor(flag: &WeightedFlag, w: &SparseTensor) -> Result<Rat> {
    if flag.n != w.r() {
        return Err(Error::input("flag ambient dimension does not match tensor rank"));
    }
    if flag.steps() == 0 {
        return Ok(Rat::zero());
    }

    // Route (ii): pairing route. The full gamma vector sums to zero, so the
    // det twist of every weight pairs to zero automatically.
    let gamma = flag.gamma_full();
    let mut by_pairing: Option<Rat> = None;
    for chi in state_set(w) {
        let p = gamma
            .iter()
            .zip(&chi.coords)
            .fold(Rat::zero(), |acc, (g, &c)| acc + g * rat(c));
        by_pairing = Some(match by_pairing {
            None => p,
            Some(b) => b.max(p),
        });
    }
    let by_pairing = by_pairing.expect("tensor is nonzero by construction");

    // Route (i): the sheaf-side block formula through the dual flag. A basis
    // coordinate k of V corresponds to coordinate r + 1 - k on the dual side.
    let zero_degrees = vec![Rat::zero(); flag.steps()];
    let (dual_dims, _) = dual_flag(&flag.dims, &zero_degrees, flag.n)?;
    let dual_alphas: Vec<Rat> = flag.alphas.iter().rev().cloned().collect();
    let dual = WeightedFlag::new(flag.n, dual_dims, dual_alphas)?;
    let dual_gamma = expand_blocks(&dual.dims, &dual.gamma_blocks(), flag.n);

    let mut by_blocks: Option<Rat> = None;
    for comp in 0..w.dec_type.components.len() {
        let mut comp_min: Option<Rat> = None;
        for (key, _) in w.terms.iter().filter(|(k, _)| k.0 == comp) {
            let s = key.2.iter().fold(Rat::zero(), |acc, &k| {
                acc + &dual_gamma[flag.n - k as usize]
            });
            comp_min = Some(match comp_min {
                None => s,
                Some(m) => m.min(s),
            });
        }
        if let Some(m) = comp_min {
            let val = -m;
            by_blocks = Some(match by_blocks {
                None => val,
                Some(b) => b.max(val),
            });
        }
    }
    let by_blocks = by_blocks.expect("tensor is nonzero by construction");

    if by_blocks != by_pairing {
        return Err(Error::certificate(format!(
            "mu_filtration routes disagree: blocks {by_blocks} vs pairing {by_pairing}"
        )));
    }
    Ok(by_pairing)
}

/// Per-component filtration values; entry `i` is `None` when component `i`
/// carries no terms. Used by the homogenization calculus.
pub fn mu_filtration_components(flag: &WeightedFlag, w: &SparseTensor) -> Result<Vec<Option<Rat>>> {
    let n_comp = w.dec_type.components.len();
    let mut out = vec![None; n_comp];
    for comp in 0..n_comp {
        let terms: Vec<(TermKey, Rat)> = w
            .terms
            .iter()
            .filter(|(k, _)| k.0 == comp)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        if terms.is_empty() {
            continue;
        }
        let mut sub_type = w.dec_type.clone();
        // keep indices stable by restricting terms, not components
        sub_type.components = w.dec_type.components.clone();
        let sub = SparseTensor::new(sub_type, terms)?;
        out[comp] = Some(mu_filtration_tensor(flag, &sub)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::frac;

    pub fn simple_type(r: usize, a: u32, b: u32, c: u32) -> DecType {
        DecType::new_unchecked(r, vec![Component { a, b, c }])
    }

    fn t(dec: DecType, terms: &[(&[u8], i64)]) -> SparseTensor {
        SparseTensor::new(
            dec,
            terms
                .iter()
                .map(|(mi, c)| ((0usize, 0usize, mi.to_vec()), rat(*c)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn weight_of_term_examples() {
        let d = simple_type(2, 2, 1, 0);
        let w = weight_of_term(&(0, 0, vec![1, 1]), &d);
        assert_eq!(w.coords, vec![2, 0]);

        let d = simple_type(2, 2, 1, 2);
        let w = weight_of_term(&(0, 0, vec![1, 2]), &d);
        assert_eq!(w.coords, vec![-1, -1]);

        let d = simple_type(3, 1, 1, 0);
        let w = weight_of_term(&(0, 0, vec![2]), &d);
        assert_eq!(w.coords, vec![0, 1, 0]);
    }

    #[test]
    fn state_set_examples() {
        let w = t(simple_type(2, 2, 1, 0), &[(&[1, 1], 1)]);
        let s = state_set(&w);
        assert_eq!(s.len(), 1);
        assert!(s.contains(&Character::new(vec![2, 0])));

        let w = t(simple_type(2, 2, 1, 0), &[(&[1, 2], 1), (&[2, 1], 1)]);
        let s = state_set(&w);
        assert_eq!(s.len(), 1);
        assert!(s.contains(&Character::new(vec![1, 1])));

        let w = t(simple_type(2, 2, 1, 2), &[(&[1, 1], 1), (&[2, 2], 1)]);
        let s = state_set(&w);
        assert_eq!(s.len(), 2);
        assert!(s.contains(&Character::new(vec![0, -2])));
        assert!(s.contains(&Character::new(vec![-2, 0])));
    }

    #[test]
    fn merged_zero_tensor_rejected() {
        let d = simple_type(2, 1, 1, 0);
        let r = SparseTensor::new(
            d,
            vec![
                ((0, 0, vec![1]), rat(1)),
                ((0, 0, vec![1]), rat(-1)),
            ],
        );
        assert!(r.is_err());
    }

    #[test]
    fn mu_examples() {
        let w = t(simple_type(2, 2, 1, 0), &[(&[1, 1], 1)]);
        assert_eq!(mu(&OnePS::gl(vec![1, -1]), &w).unwrap(), 2);

        let q = t(simple_type(2, 2, 1, 2), &[(&[1, 2], 1), (&[2, 1], 1)]);
        for s in [1i64, 3, -2] {
            assert_eq!(mu(&OnePS::gl(vec![s, -s]), &q).unwrap(), 0);
        }

        assert_eq!(mu(&OnePS::gl(vec![0, 0]), &w).unwrap(), 0);
    }

    #[test]
    fn act_examples() {
        let w = t(simple_type(2, 2, 1, 0), &[(&[1, 1], 1)]);
        let id = identity_matrix(2);
        assert_eq!(act(&id, &w).unwrap(), w);

        let g = vec![vec![rat(2), rat(0)], vec![rat(0), rat(1)]];
        let gw = act(&g, &w).unwrap();
        assert_eq!(gw.terms[&(0, 0, vec![1, 1])], rat(4));

        let p = permutation_matrix(&[1, 0]);
        let pw = act(&p, &w).unwrap();
        assert_eq!(pw.terms.len(), 1);
        assert_eq!(pw.terms[&(0, 0, vec![2, 2])], rat(1));

        let singular = vec![vec![rat(1), rat(1)], vec![rat(1), rat(1)]];
        assert!(act(&singular, &w).is_err());
    }

    #[test]
    fn act_is_multiplicative() {
        let w = t(simple_type(2, 2, 1, 1), &[(&[1, 2], 3), (&[2, 2], -1)]);
        let g = vec![vec![rat(1), rat(2)], vec![rat(0), rat(1)]];
        let h = vec![vec![rat(1), rat(0)], vec![frac(1, 2), rat(1)]];
        let gh: Matrix = (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| (0..2).fold(Rat::zero(), |acc, k| acc + &g[i][k] * &h[k][j]))
                    .collect()
            })
            .collect();
        assert_eq!(
            act(&g, &act(&h, &w).unwrap()).unwrap(),
            act(&gh, &w).unwrap()
        );
    }

    #[test]
    fn gamma_vector_examples() {
        assert_eq!(gamma_vector(&[1], &[rat(1)], 3).unwrap(), vec![rat(-2), rat(1)]);
        assert_eq!(
            gamma_vector(&[1, 3], &[frac(1, 2), frac(1, 4)], 4).unwrap(),
            vec![frac(-7, 4), frac(1, 4), frac(5, 4)]
        );
        assert!(gamma_vector(&[1], &[rat(0)], 3).is_err());
        assert!(gamma_vector(&[2, 1], &[rat(1), rat(1)], 4).is_err());
    }

    #[test]
    fn mu_filtration_examples() {
        let flag = WeightedFlag::new(2, vec![1], vec![rat(1)]).unwrap();

        let w = t(simple_type(2, 2, 1, 0), &[(&[1, 1], 1)]);
        assert_eq!(mu_filtration_tensor(&flag, &w).unwrap(), rat(-2));

        let q = t(simple_type(2, 2, 1, 2), &[(&[1, 2], 1), (&[2, 1], 1)]);
        assert_eq!(mu_filtration_tensor(&flag, &q).unwrap(), rat(0));

        let empty = WeightedFlag::empty(2);
        assert_eq!(mu_filtration_tensor(&empty, &w).unwrap(), rat(0));
    }
}
