//! Independent slow paths used to validate the fast ones: the symbolic
//! one-parameter orbit, exhaustive destabilization search on a box, and the
//! classical orthogonal and adjoint decoration tensors built through the
//! dual-slot expansion.

use std::collections::BTreeMap;

use crate::lattice::{norm_sq, pairing, primitive_integral, weighted_flag_of, OnePS, WeightedFlag};
use crate::rat::{rat, Rat};
use crate::tensor::{weight_of_term, Component, DecType, SparseTensor, TermKey};
use crate::{Error, Result};

/// The graded pieces of `lambda(z) . w`: exponent of `z` mapped to the
/// nonzero sub-tensor scaling with it.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentTensor {
    pub pieces: BTreeMap<i64, SparseTensor>,
}

impl LaurentTensor {
    /// Largest exponent present; equals `mu(lambda, w)`.
    pub fn top_exponent(&self) -> i64 {
        *self.pieces.keys().next_back().expect("pieces are nonempty")
    }

    /// The limit as `z` grows exists iff no positive exponent occurs.
    pub fn limit_exists(&self) -> bool {
        self.top_exponent() <= 0
    }

    /// The fixed part surviving in the limit, when the limit exists and the
    /// exponent-zero piece is nonzero.
    pub fn limit(&self) -> Option<&SparseTensor> {
        if self.limit_exists() {
            self.pieces.get(&0)
        } else {
            None
        }
    }
}

/// Groups the terms of `w` by the pairing of `lambda` with their weights.
pub fn laurent_orbit(lambda: &OnePS, w: &SparseTensor) -> Result<LaurentTensor> {
    let mut grouped: BTreeMap<i64, Vec<(TermKey, Rat)>> = BTreeMap::new();
    for (key, coeff) in &w.terms {
        let chi = weight_of_term(key, &w.dec_type);
        let e = pairing(lambda, &chi)?;
        grouped.entry(e).or_default().push((key.clone(), coeff.clone()));
    }
    let mut pieces = BTreeMap::new();
    for (e, terms) in grouped {
        pieces.insert(e, SparseTensor::new(w.dec_type.clone(), terms)?);
    }
    Ok(LaurentTensor { pieces })
}

/// Best destabilizing direction found by exhaustive search on a box.
#[derive(Clone, Debug, PartialEq)]
pub struct BruteForceResult {
    pub lambda: OnePS,
    pub q: i64,
    pub norm_sq: i64,
    /// All primitive optimal rays in the box, for uniqueness audits.
    pub optima: Vec<OnePS>,
}

/// Minimizes `mu(lambda, w) / |lambda|` over nonzero integral sum-zero
/// vectors with sup-norm at most `box_bound`, by the radical-free predicate
/// `q1^2 n2 <=> q2^2 n1` on negative values. Returns `None` when no
/// direction gives a negative value.
pub fn brute_force_instability(w: &SparseTensor, box_bound: i64) -> Result<Option<BruteForceResult>> {
    if box_bound < 1 {
        return Err(Error::input("box bound must be at least 1"));
    }
    let r = w.r();
    let mut best: Option<(OnePS, i64, i64)> = None;
    let mut optima: Vec<OnePS> = Vec::new();

    let mut cur = vec![0i64; r];
    enumerate(&mut cur, 0, box_bound, &mut |v: &[i64]| -> Result<()> {
        if v.iter().sum::<i64>() != 0 || v.iter().all(|&x| x == 0) {
            return Ok(());
        }
        let lambda = OnePS::sl(v.to_vec()).expect("sum is zero");
        if crate::tensor::mu(&lambda, w)? >= 0 {
            return Ok(());
        }
        // compare on the primitive representative; the slope is constant
        // along the ray
        let prim = primitive_integral(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>())
            .expect("nonzero vector");
        let q = crate::tensor::mu(&prim, w)?;
        let n = norm_sq(&prim);
        match &best {
            None => {
                best = Some((prim.clone(), q, n));
                optima = vec![prim];
            }
            Some((_, bq, bn)) => {
                let (lhs, rhs) = (q * q * bn, bq * bq * n);
                if lhs > rhs {
                    best = Some((prim.clone(), q, n));
                    optima = vec![prim];
                } else if lhs == rhs && !optima.contains(&prim) {
                    optima.push(prim);
                }
            }
        }
        Ok(())
    })?;

    Ok(best.map(|(lambda, q, n)| BruteForceResult {
        lambda,
        q,
        norm_sq: n,
        optima,
    }))
}

fn enumerate<F: FnMut(&[i64]) -> Result<()>>(
    cur: &mut Vec<i64>,
    idx: usize,
    bound: i64,
    f: &mut F,
) -> Result<()> {
    if idx == cur.len() {
        return f(cur);
    }
    for v in -bound..=bound {
        cur[idx] = v;
        enumerate(cur, idx + 1, bound, f)?;
    }
    Ok(())
}

/// The common weighted flag of the brute-force optima, when they share one.
pub fn optima_flag(result: &BruteForceResult) -> Option<WeightedFlag> {
    let mut flags = result.optima.iter().map(|l| weighted_flag_of(l).0);
    let first = flags.next()?;
    if flags.all(|f| f == first) {
        Some(first)
    } else {
        None
    }
}

/// A tensor slot before expansion: an ordinary basis index or a dual one.
/// Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Primal(u8),
    Dual(u8),
}

fn permutations_signed(items: &[u8]) -> Vec<(Vec<u8>, i64)> {
    if items.is_empty() {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        // removing position i jumps x over i earlier elements
        let s = if i % 2 == 0 { 1 } else { -1 };
        for (tail, ts) in permutations_signed(&rest) {
            let mut p = vec![x];
            p.extend(tail);
            out.push((p, s * ts));
        }
    }
    out
}

/// Expands dual slots through the identification of the dual space with the
/// top-minus-one exterior power twisted by `det^{-1}`: the dual of the
/// `i`-th basis vector becomes `(-1)^{i-1}` times the signed sum over
/// orderings of the complementary indices, each ordering one product term,
/// with one unit of `det^{-1}`. The expanded image of the `i`-th dual vector
/// has weight exactly `-e_i`. All input terms must share one slot signature.
pub fn dual_embed(r: usize, terms: &[(Vec<Slot>, Rat)]) -> Result<SparseTensor> {
    if terms.is_empty() {
        return Err(Error::input("dual_embed needs at least one term"));
    }
    let signature: Vec<bool> = terms[0]
        .0
        .iter()
        .map(|s| matches!(s, Slot::Dual(_)))
        .collect();
    for (slots, _) in terms {
        let sig: Vec<bool> = slots.iter().map(|s| matches!(s, Slot::Dual(_))).collect();
        if sig != signature {
            return Err(Error::input("all terms must share one primal/dual slot signature"));
        }
        for s in slots {
            let i = match s {
                Slot::Primal(i) | Slot::Dual(i) => *i,
            };
            if i == 0 || i as usize > r {
                return Err(Error::input(format!("slot index must lie in 1..={r}")));
            }
        }
    }
    let dual_count = signature.iter().filter(|&&d| d).count() as u32;
    let primal_count = signature.len() as u32 - dual_count;
    let a = primal_count + dual_count * (r as u32 - 1);
    let dec = DecType::new_unchecked(r, vec![Component { a, b: 1, c: dual_count }]);

    let mut raw: Vec<(TermKey, Rat)> = Vec::new();
    for (slots, coeff) in terms {
        let mut partial: Vec<(Vec<u8>, i64)> = vec![(Vec::new(), 1)];
        for slot in slots {
            match slot {
                Slot::Primal(i) => {
                    for (mi, _) in partial.iter_mut() {
                        mi.push(*i);
                    }
                }
                Slot::Dual(i) => {
                    let complement: Vec<u8> =
                        (1..=r as u8).filter(|&j| j != *i).collect();
                    let base_sign = if (i - 1) % 2 == 0 { 1 } else { -1 };
                    let mut next = Vec::new();
                    for (mi, s) in &partial {
                        for (perm, ps) in permutations_signed(&complement) {
                            let mut m = mi.clone();
                            m.extend(perm);
                            next.push((m, s * base_sign * ps));
                        }
                    }
                    partial = next;
                }
            }
        }
        for (mi, s) in partial {
            raw.push(((0, 0, mi), coeff * rat(s)));
        }
    }
    SparseTensor::new(dec, raw)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrthBasis {
    Standard,
    Hyperbolic,
}

/// The invariant symmetric bilinear form as a decoration: the sum of
/// `b_i* (x) b_j*` over the diagonal (standard) or the antidiagonal
/// (hyperbolic), expanded into an honest tensor of type
/// `(2(r-1), 1, 2)`.
pub fn orthogonal_example(r: usize, basis: OrthBasis) -> Result<(DecType, SparseTensor)> {
    if r < 2 {
        return Err(Error::input("orthogonal example needs rank at least 2"));
    }
    let terms: Vec<(Vec<Slot>, Rat)> = (1..=r as u8)
        .map(|i| {
            let j = match basis {
                OrthBasis::Standard => i,
                OrthBasis::Hyperbolic => r as u8 + 1 - i,
            };
            (vec![Slot::Dual(i), Slot::Dual(j)], rat(1))
        })
        .collect();
    let w = dual_embed(r, &terms)?;
    Ok((w.dec_type.clone(), w))
}

/// The bracket of the three-dimensional simple Lie algebra as a decoration:
/// basis `b1, b2, b3` with `[b1, b3] = b2`, `[b2, b1] = 2 b1`,
/// `[b2, b3] = -2 b3`; the two argument slots are dual and expand to type
/// `(5, 1, 2)`.
pub fn adjoint_example() -> (DecType, SparseTensor) {
    let consts: [(u8, u8, u8, i64); 6] = [
        (1, 3, 2, 1),
        (3, 1, 2, -1),
        (2, 1, 1, 2),
        (1, 2, 1, -2),
        (2, 3, 3, -2),
        (3, 2, 3, 2),
    ];
    let terms: Vec<(Vec<Slot>, Rat)> = consts
        .iter()
        .map(|&(i, j, k, c)| (vec![Slot::Dual(i), Slot::Dual(j), Slot::Primal(k)], rat(c)))
        .collect();
    let w = dual_embed(3, &terms).expect("fixed valid input");
    (w.dec_type.clone(), w)
}
