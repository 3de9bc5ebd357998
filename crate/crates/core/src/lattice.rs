//! Characters and one-parameter subgroups of the diagonal maximal torus of
//! `GL_n`, their duality pairing and norm, weighted flags, and dual-flag
//! arithmetic.
//!
//! Only the split diagonal torus is modeled; other tori are reached by
//! acting with explicit rational group elements on the tensor side.

use num::bigint::BigInt;
use num::integer::{gcd, lcm};
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rat::{rat, Rat};
use crate::{Error, Result};

/// An integral character of the diagonal torus, written in the basis
/// `e_1, ..., e_n` of coordinate characters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Character {
    pub coords: Vec<i64>,
}

impl Character {
    pub fn new(coords: Vec<i64>) -> Self {
        Character { coords }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupMode {
    GL,
    SL,
}

/// A one-parameter subgroup of the diagonal torus: `z -> diag(z^w_1, ..., z^w_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnePS {
    pub weights: Vec<i64>,
    pub group_mode: GroupMode,
}

impl OnePS {
    pub fn gl(weights: Vec<i64>) -> Self {
        OnePS {
            weights,
            group_mode: GroupMode::GL,
        }
    }

    /// SL cocharacter; the weights must sum to zero.
    pub fn sl(weights: Vec<i64>) -> Result<Self> {
        if weights.iter().sum::<i64>() != 0 {
            return Err(Error::input("SL one-parameter subgroup must have weight sum 0"));
        }
        Ok(OnePS {
            weights,
            group_mode: GroupMode::SL,
        })
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.weights.iter().all(|&w| w == 0)
    }
}

/// A weighted flag in coordinate-adapted form: `V_i` is spanned by the first
/// `d_i` basis vectors of the (permuted) standard basis. Parabolic subgroups
/// of `GL_n` are represented solely by their flag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedFlag {
    /// Ambient dimension `n`.
    pub n: usize,
    /// Strictly increasing step dimensions `0 < d_1 < ... < d_s < n`.
    pub dims: Vec<usize>,
    /// Positive rational weights, one per step.
    pub alphas: Vec<Rat>,
    /// Cached block weights `gamma_1 < ... < gamma_{s+1}` when the flag was
    /// derived from a cocharacter. Satisfies `gamma_{i+1} - gamma_i = alpha_i * n`.
    pub gammas: Option<Vec<Rat>>,
}

impl WeightedFlag {
    pub fn new(n: usize, dims: Vec<usize>, alphas: Vec<Rat>) -> Result<Self> {
        if dims.len() != alphas.len() {
            return Err(Error::input("flag dims and alphas must have equal length"));
        }
        let mut prev = 0usize;
        for &d in &dims {
            if d <= prev || d >= n {
                return Err(Error::input(format!(
                    "flag dims must satisfy 0 < d_1 < ... < d_s < n, got {dims:?} with n={n}"
                )));
            }
            prev = d;
        }
        for a in &alphas {
            if !a.is_positive() {
                return Err(Error::input("flag weights alpha_i must be positive"));
            }
        }
        Ok(WeightedFlag {
            n,
            dims,
            alphas,
            gammas: None,
        })
    }

    pub fn empty(n: usize) -> Self {
        WeightedFlag {
            n,
            dims: vec![],
            alphas: vec![],
            gammas: None,
        }
    }

    pub fn steps(&self) -> usize {
        self.dims.len()
    }

    /// Block weights `(gamma_1, ..., gamma_{s+1})` of the associated
    /// cocharacter direction: `sum_i alpha_i * (d_i - n, ..., d_i, ...)`
    /// collapsed to one entry per block. The full `n`-vector sums to zero.
    pub fn gamma_blocks(&self) -> Vec<Rat> {
        let s = self.steps();
        let n = rat(self.n as i64);
        let mut blocks = vec![Rat::zero(); s + 1];
        for (i, alpha) in self.alphas.iter().enumerate() {
            let d = rat(self.dims[i] as i64);
            // steps 1..=i get d_i - n, later blocks get d_i
            for (j, b) in blocks.iter_mut().enumerate() {
                if j <= i {
                    *b += alpha * (&d - &n);
                } else {
                    *b += alpha * &d;
                }
            }
        }
        blocks
    }

    /// Expands the block weights to a full vector of length `n`.
    pub fn gamma_full(&self) -> Vec<Rat> {
        expand_blocks(&self.dims, &self.gamma_blocks(), self.n)
    }

    /// Block index (1-based) of a basis coordinate (1-based) w.r.t. this flag.
    pub fn block_of(&self, coord: usize) -> usize {
        for (i, &d) in self.dims.iter().enumerate() {
            if coord <= d {
                return i + 1;
            }
        }
        self.steps() + 1
    }
}

/// Expands per-block values to a full vector of length `n` given the step dims.
pub fn expand_blocks(dims: &[usize], blocks: &[Rat], n: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(n);
    let mut bounds: Vec<usize> = dims.to_vec();
    bounds.push(n);
    let mut start = 0usize;
    for (b, &end) in blocks.iter().zip(&bounds) {
        for _ in start..end {
            out.push(b.clone());
        }
        start = end;
    }
    out
}

/// The duality pairing `<lambda, chi> = sum_i lambda_i * chi_i`.
pub fn pairing(lambda: &OnePS, chi: &Character) -> Result<i64> {
    if lambda.rank() != chi.rank() {
        return Err(Error::input(format!(
            "pairing rank mismatch: {} vs {}",
            lambda.rank(),
            chi.rank()
        )));
    }
    Ok(lambda
        .weights
        .iter()
        .zip(&chi.coords)
        .map(|(l, c)| l * c)
        .sum())
}

/// The square of the invariant norm, `sum_i lambda_i^2`. The norm itself may
/// be irrational and is never materialized.
pub fn norm_sq(lambda: &OnePS) -> i64 {
    lambda.weights.iter().map(|w| w * w).sum()
}

/// The weighted flag of a cocharacter: steps are the ascending eigenweight
/// spaces, `alpha_i = (gamma_{i+1} - gamma_i) / n`. Also returns the basis
/// permutation adapting the flag to coordinates: `perm[k]` is the original
/// index (0-based) of the `k`-th permuted basis vector, sorted by ascending
/// weight with ties kept in original order.
pub fn weighted_flag_of(lambda: &OnePS) -> (WeightedFlag, Vec<usize>) {
    let n = lambda.rank();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (lambda.weights[i], i));

    let mut dims = Vec::new();
    let mut gammas = Vec::new();
    let mut count = 0usize;
    for &i in &order {
        let w = lambda.weights[i];
        if gammas.last() != Some(&rat(w)) {
            if count > 0 {
                dims.push(count);
            }
            gammas.push(rat(w));
        }
        count += 1;
    }
    let alphas: Vec<Rat> = gammas
        .windows(2)
        .map(|g| (&g[1] - &g[0]) / rat(n as i64))
        .collect();
    let mut flag = WeightedFlag {
        n,
        dims,
        alphas,
        gammas: None,
    };
    flag.gammas = Some(gammas);
    (flag, order)
}

/// The unique primitive integral sum-zero cocharacter whose weighted flag is
/// the given one. The empty flag yields the zero cocharacter.
pub fn ops_from_flag(flag: &WeightedFlag) -> OnePS {
    if flag.steps() == 0 {
        return OnePS::sl(vec![0; flag.n]).expect("zero vector sums to zero");
    }
    let full = flag.gamma_full();
    primitive_integral(&full).expect("gamma vector of a nonempty flag is nonzero")
}

/// Scales a nonzero rational vector to its primitive integral representative
/// on the same ray.
pub fn primitive_integral(v: &[Rat]) -> Option<OnePS> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let mut scale = BigInt::from(1);
    for x in v {
        scale = lcm(scale, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &scale / x.denom()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = gcd(g, x.abs());
    }
    let weights: Vec<i64> = ints
        .iter()
        .map(|x| {
            let q = x / &g;
            i64::try_from(&q).expect("primitive cocharacter weight exceeds i64")
        })
        .collect();
    let sum: i64 = weights.iter().sum();
    Some(if sum == 0 {
        OnePS {
            weights,
            group_mode: GroupMode::SL,
        }
    } else {
        OnePS::gl(weights)
    })
}

/// Dual-flag arithmetic on (dims, degrees): `dims''_i = n - d_{s+1-i}` and
/// `degrees''_i = degrees_{s+1-i}`, valid under trivial total determinant.
pub fn dual_flag(dims: &[usize], degrees: &[Rat], n: usize) -> Result<(Vec<usize>, Vec<Rat>)> {
    if dims.len() != degrees.len() {
        return Err(Error::input("dual_flag: one degree per flag step required"));
    }
    let out_dims: Vec<usize> = dims.iter().rev().map(|&d| n - d).collect();
    let out_degrees: Vec<Rat> = degrees.iter().rev().cloned().collect();
    Ok((out_dims, out_degrees))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::frac;

    #[test]
    fn pairing_examples() {
        let l = OnePS::gl(vec![1, -1]);
        assert_eq!(pairing(&l, &Character::new(vec![2, 0])).unwrap(), 2);
        let z = OnePS::gl(vec![0, 0, 0]);
        assert_eq!(pairing(&z, &Character::new(vec![5, -3, 7])).unwrap(), 0);
        let l = OnePS::gl(vec![-2, 1, 1]);
        assert_eq!(pairing(&l, &Character::new(vec![-2, 1, 1])).unwrap(), 6);
        assert!(pairing(&l, &Character::new(vec![1, 2])).is_err());
    }

    #[test]
    fn norm_sq_examples() {
        assert_eq!(norm_sq(&OnePS::gl(vec![1, -1])), 2);
        assert_eq!(norm_sq(&OnePS::gl(vec![0, 0, 0, 0])), 0);
        assert_eq!(norm_sq(&OnePS::gl(vec![-2, 1, 1])), 6);
    }

    #[test]
    fn weighted_flag_examples() {
        let (f, perm) = weighted_flag_of(&OnePS::gl(vec![-2, 1, 1]));
        assert_eq!(f.dims, vec![1]);
        assert_eq!(f.alphas, vec![rat(1)]);
        assert_eq!(perm, vec![0, 1, 2]);

        let (f, _) = weighted_flag_of(&OnePS::gl(vec![0, 0]));
        assert_eq!(f.steps(), 0);

        let (f, perm) = weighted_flag_of(&OnePS::gl(vec![3, 1, -4]));
        assert_eq!(f.dims, vec![1, 2]);
        assert_eq!(f.alphas, vec![frac(5, 3), frac(2, 3)]);
        assert_eq!(perm, vec![2, 1, 0]);
    }

    #[test]
    fn ops_from_flag_examples() {
        let f = WeightedFlag::new(3, vec![1], vec![rat(1)]).unwrap();
        assert_eq!(ops_from_flag(&f).weights, vec![-2, 1, 1]);

        let f = WeightedFlag::empty(2);
        assert_eq!(ops_from_flag(&f).weights, vec![0, 0]);

        let f = WeightedFlag::new(4, vec![1, 3], vec![frac(1, 2), frac(1, 4)]).unwrap();
        assert_eq!(ops_from_flag(&f).weights, vec![-7, 1, 1, 5]);
    }

    #[test]
    fn dual_flag_examples() {
        let (d, deg) = dual_flag(&[1], &[rat(5)], 3).unwrap();
        assert_eq!(d, vec![2]);
        assert_eq!(deg, vec![rat(5)]);

        let (d, deg) = dual_flag(&[1, 3], &[rat(2), rat(7)], 4).unwrap();
        assert_eq!(d, vec![1, 3]);
        assert_eq!(deg, vec![rat(7), rat(2)]);

        let (d, deg) = dual_flag(&[], &[], 5).unwrap();
        assert!(d.is_empty() && deg.is_empty());
    }

    #[test]
    fn dual_flag_involution() {
        let dims = vec![1usize, 3, 4];
        let degs = vec![rat(2), rat(-1), rat(-1)];
        let (d1, g1) = dual_flag(&dims, &degs, 6).unwrap();
        let (d2, g2) = dual_flag(&d1, &g1, 6).unwrap();
        assert_eq!(d2, dims);
        assert_eq!(g2, degs);
    }

    #[test]
    fn flag_roundtrip_and_conjugation() {
        let l = OnePS::gl(vec![4, -2, -2, 0, 4]);
        let (f, _) = weighted_flag_of(&l);
        let prim = ops_from_flag(&f);
        // Original has weight sum 4; roundtrip recovers the primitive
        // sum-zero vector on the same flag's ray.
        let (f2, _) = weighted_flag_of(&prim);
        assert_eq!(f.dims, f2.dims);
        // alphas agree up to one positive scale (primitive normalization)
        let scale = &f2.alphas[0] / &f.alphas[0];
        assert!(scale > Rat::zero());
        for (a, b) in f.alphas.iter().zip(&f2.alphas) {
            assert_eq!(a * &scale, b.clone());
        }

        // permuting coordinates leaves dims and alphas unchanged
        let l2 = OnePS::gl(vec![-2, 4, 0, 4, -2]);
        let (g, _) = weighted_flag_of(&l2);
        assert_eq!(f.dims, g.dims);
        assert_eq!(f.alphas, g.alphas);
    }

    #[test]
    fn gamma_blocks_match_remark() {
        let f = WeightedFlag::new(4, vec![1, 3], vec![frac(1, 2), frac(1, 4)]).unwrap();
        let blocks = f.gamma_blocks();
        assert_eq!(blocks, vec![frac(-7, 4), frac(1, 4), frac(5, 4)]);
        // consecutive block differences are alpha_i * n
        assert_eq!(&blocks[1] - &blocks[0], frac(1, 2) * rat(4));
        assert_eq!(&blocks[2] - &blocks[1], frac(1, 4) * rat(4));
        // full vector sums to zero
        let full = f.gamma_full();
        assert!(full.iter().fold(Rat::zero(), |a, b| a + b).is_zero());
    }
}
