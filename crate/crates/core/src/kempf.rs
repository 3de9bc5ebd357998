//! Exact solution of the instability minimization within the fixed maximal
//! torus: a rational Wolfe-style minimum-norm-point solver with optimality
//! certificates, the instability flag and character, and a seeded
//! multi-start search over moved frames.

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lattice::{
    norm_sq, primitive_integral, weighted_flag_of, Character, OnePS, WeightedFlag,
};
use crate::rat::{rat, Rat};
use crate::tensor::{act, identity_matrix, mu, state_set, Matrix, SparseTensor};
use crate::{Error, Result};

/// A finite cloud of rational points: characters projected orthogonally onto
/// the sum-zero hyperplane.
#[derive(Clone, Debug, PartialEq)]
pub struct StateCloud {
    pub points: Vec<Vec<Rat>>,
}

impl StateCloud {
    /// Projects integral characters onto the sum-zero hyperplane.
    pub fn from_characters<'a>(chars: impl IntoIterator<Item = &'a Character>, n: usize) -> Self {
        let points = chars
            .into_iter()
            .map(|c| {
                let mean = rat(c.coords.iter().sum::<i64>()) / rat(n as i64);
                c.coords.iter().map(|&x| rat(x) - &mean).collect()
            })
            .collect();
        StateCloud { points }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    TorusSemistable,
    Unstable,
}

/// Result of the within-torus instability minimization.
#[derive(Clone, Debug, PartialEq)]
pub struct InstabilityResult {
    pub verdict: Verdict,
    /// Primitive integral sum-zero optimal destabilizing cocharacter,
    /// present iff unstable.
    pub lambda_star: Option<OnePS>,
    /// `q = mu(lambda*, w)`, negative when unstable.
    pub q: Option<i64>,
    /// `q^2 / |lambda*|^2`; the minimal slope is `m0 = -sqrt(m0_sq)`.
    pub m0_sq: Option<Rat>,
    pub flag: Option<WeightedFlag>,
    /// Block sizes and exponents of the instability character of `lambda*`.
    pub char_exponents: Option<Vec<(usize, i64)>>,
}

impl InstabilityResult {
    fn semistable() -> Self {
        InstabilityResult {
            verdict: Verdict::TorusSemistable,
            lambda_star: None,
            q: None,
            m0_sq: None,
            flag: None,
            char_exponents: None,
        }
    }
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Solves a square rational linear system by Gaussian elimination. Returns
/// `None` when the matrix is singular.
fn solve_linear(mut m: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(pivot, col);
        b.swap(pivot, col);
        let pv = m[col][col].clone();
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &pv;
            for j in col..n {
                let sub = &f * &m[col][j];
                m[i][j] -= sub;
            }
            let sub = &f * &b[col];
            b[i] -= sub;
        }
    }
    Some(
        b.iter()
            .enumerate()
            .map(|(i, x)| x / &m[i][i])
            .collect(),
    )
}

/// Affine minimizer of the norm over the affine hull of the given points:
/// coefficients `v` with `sum v = 1` minimizing `|sum v_i s_i|^2`. Solves the
/// bordered Gram system exactly.
fn affine_minimizer(points: &[&Vec<Rat>]) -> Option<Vec<Rat>> {
    let m = points.len();
    let mut sys = vec![vec![Rat::zero(); m + 1]; m + 1];
    let mut rhs = vec![Rat::zero(); m + 1];
    rhs[0] = Rat::one();
    for i in 0..m {
        sys[0][i + 1] = Rat::one();
        sys[i + 1][0] = Rat::one();
        for j in 0..m {
            sys[i + 1][j + 1] = dot(points[i], points[j]);
        }
    }
    let sol = solve_linear(sys, rhs)?;
    Some(sol[1..].to_vec())
}

/// The unique point of minimal norm in the convex hull of the input points,
/// found by Wolfe's active-set algorithm over exact rationals. The
/// first-order optimality certificate `<p, x - p> >= 0` is verified against
/// every input point before returning. Pivot ties are broken by
/// lexicographic order on point indices.
pub fn min_norm_point(cloud: &StateCloud) -> Result<Vec<Rat>> {
    let pts = &cloud.points;
    if pts.is_empty() {
        return Err(Error::input("min_norm_point requires a nonempty point list"));
    }
    let dim = pts[0].len();

    // start with the lowest-index point of minimal norm
    let mut start = 0usize;
    let mut start_norm = dot(&pts[0], &pts[0]);
    for (i, p) in pts.iter().enumerate().skip(1) {
        let n = dot(p, p);
        if n < start_norm {
            start = i;
            start_norm = n;
        }
    }
    let mut corral: Vec<usize> = vec![start];
    let mut weights: Vec<Rat> = vec![Rat::one()];
    let mut x: Vec<Rat> = pts[start].clone();

    let max_iters = 10_000usize;
    for _ in 0..max_iters {
        // major cycle: most improving point, ties by lowest index
        let xx = dot(&x, &x);
        if xx.is_zero() {
            break;
        }
        let mut best_j = None;
        let mut best_val = xx.clone();
        for (j, p) in pts.iter().enumerate() {
            let v = dot(&x, p);
            if v < best_val {
                best_val = v;
                best_j = Some(j);
            }
        }
        let Some(j) = best_j else {
            break; // optimal
        };
        if corral.contains(&j) {
            break;
        }
        corral.push(j);
        weights.push(Rat::zero());

        // minor cycle
        loop {
            let members: Vec<&Vec<Rat>> = corral.iter().map(|&i| &pts[i]).collect();
            let v = match affine_minimizer(&members) {
                Some(v) => v,
                None => {
                    // affinely dependent corral: drop the newest point
                    corral.pop();
                    weights.pop();
                    break;
                }
            };
            if v.iter().all(|c| c.is_positive()) {
                x = vec![Rat::zero(); dim];
                for (c, &i) in v.iter().zip(&corral) {
                    for (xk, pk) in x.iter_mut().zip(&pts[i]) {
                        *xk += c * pk;
                    }
                }
                weights = v;
                break;
            }
            // line search toward v keeping weights nonnegative
            let mut theta = Rat::one();
            for (wi, vi) in weights.iter().zip(&v) {
                if vi <= &Rat::zero() {
                    let denom = wi - vi;
                    if !denom.is_zero() {
                        let t = wi / &denom;
                        if t < theta {
                            theta = t;
                        }
                    }
                }
            }
            let new_weights: Vec<Rat> = weights
                .iter()
                .zip(&v)
                .map(|(w, vi)| w + &theta * (vi - w))
                .collect();
            let mut keep_idx = Vec::new();
            let mut keep_w = Vec::new();
            for (k, w) in new_weights.iter().enumerate() {
                if w.is_positive() {
                    keep_idx.push(corral[k]);
                    keep_w.push(w.clone());
                }
            }
            corral = keep_idx;
            weights = keep_w;
            x = vec![Rat::zero(); dim];
            for (c, &i) in weights.iter().zip(&corral) {
                for (xk, pk) in x.iter_mut().zip(&pts[i]) {
                    *xk += c * pk;
                }
            }
        }
    }

    // optimality certificate: <x, p - x> >= 0 for every input point
    let xx = dot(&x, &x);
    for p in pts {
        if dot(&x, p) < xx {
            return Err(Error::certificate(
                "min_norm_point optimality certificate violated",
            ));
        }
    }
    Ok(x)
}

/// Within-torus instability: projects the state set to the sum-zero
/// hyperplane, finds the nearest point to the origin, and reads off the
/// optimal destabilizing cocharacter from its ray.
pub fn torus_instability(w: &SparseTensor) -> Result<InstabilityResult> {
    let states = state_set(w);
    let cloud = StateCloud::from_characters(states.iter(), w.r());
    let p = min_norm_point(&cloud)?;
    if p.iter().all(|x| x.is_zero()) {
        return Ok(InstabilityResult::semistable());
    }
    let neg: Vec<Rat> = p.iter().map(|x| -x).collect();
    let lambda = primitive_integral(&neg).expect("nonzero direction");
    let q = mu(&lambda, w)?;
    if q >= 0 {
        return Err(Error::certificate(
            "torus_instability: nonzero minimum-norm point but mu(lambda*) >= 0",
        ));
    }
    let nsq = norm_sq(&lambda);
    let (flag, _) = weighted_flag_of(&lambda);
    let char_exp = instability_character(&lambda);
    Ok(InstabilityResult {
        verdict: Verdict::Unstable,
        q: Some(q),
        m0_sq: Some(rat(q * q) / rat(nsq)),
        char_exponents: Some(char_exp),
        lambda_star: Some(lambda),
        flag: Some(flag),
    })
}

/// Exact feasibility: maximize `c . w` over `{ w >= 0 : A w = b }` with a
/// two-phase simplex under Bland's rule. Returns `None` if infeasible.
fn simplex_max(a: &[Vec<Rat>], b: &[Rat], c: &[Rat]) -> Option<Rat> {
    let m = a.len();
    let n = c.len();
    // make b nonnegative
    let mut a: Vec<Vec<Rat>> = a.to_vec();
    let mut b: Vec<Rat> = b.to_vec();
    for i in 0..m {
        if b[i].is_negative() {
            b[i] = -b[i].clone();
            for v in a[i].iter_mut() {
                *v = -v.clone();
            }
        }
    }
    // tableau with artificial variables n..n+m
    let total = n + m;
    let mut t: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend((0..m).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..total).collect();

    let run = |t: &mut Vec<Vec<Rat>>, basis: &mut Vec<usize>, obj: &[Rat]| -> Rat {
        loop {
            // reduced costs under current basis
            let mut y = vec![Rat::zero(); m]; // multipliers via basis costs and rows
            for (i, &bi) in basis.iter().enumerate() {
                y[i] = obj[bi].clone();
            }
            let mut entering = None;
            for j in 0..total {
                if basis.contains(&j) {
                    continue;
                }
                let mut red = obj[j].clone();
                for i in 0..m {
                    red -= &y[i] * &t[i][j];
                }
                if red.is_positive() {
                    entering = Some(j);
                    break; // Bland: lowest index
                }
            }
            let Some(e) = entering else {
                let mut val = Rat::zero();
                for (i, &bi) in basis.iter().enumerate() {
                    val += &obj[bi] * &t[i][total];
                }
                return val;
            };
            // ratio test, Bland ties by lowest basis variable
            let mut leave: Option<usize> = None;
            let mut best: Option<Rat> = None;
            for i in 0..m {
                if t[i][e].is_positive() {
                    let ratio = &t[i][total] / &t[i][e];
                    let better = match &best {
                        None => true,
                        Some(b) => {
                            &ratio < b || (&ratio == b && basis[i] < basis[leave.unwrap()])
                        }
                    };
                    if better {
                        best = Some(ratio);
                        leave = Some(i);
                    }
                }
            }
            let Some(l) = leave else {
                // unbounded; with our feasibility objectives this cannot
                // happen, treat as current value
                let mut val = Rat::zero();
                for (i, &bi) in basis.iter().enumerate() {
                    val += &obj[bi] * &t[i][total];
                }
                return val;
            };
            // pivot on (l, e)
            let pv = t[l][e].clone();
            for v in t[l].iter_mut() {
                *v = &*v / &pv;
            }
            for i in 0..m {
                if i == l || t[i][e].is_zero() {
                    continue;
                }
                let f = t[i][e].clone();
                for j in 0..=total {
                    let sub = &f * &t[l][j];
                    t[i][j] -= sub;
                }
            }
            basis[l] = e;
        }
    };

    // phase 1: drive artificials to zero
    let mut phase1 = vec![Rat::zero(); total];
    for v in phase1.iter_mut().take(total).skip(n) {
        *v = -Rat::one();
    }
    let p1 = run(&mut t, &mut basis, &phase1);
    if p1.is_negative() {
        return None;
    }
    // phase 2 (artificial columns keep cost 0 so they stay at value 0)
    let mut phase2 = vec![Rat::zero(); total];
    phase2[..n].clone_from_slice(c);
    Some(run(&mut t, &mut basis, &phase2))
}

/// True iff the origin lies in the relative interior of the convex hull of
/// the projected states: every state point receives positive weight in some
/// exact convex combination equal to zero.
pub fn torus_polystable(w: &SparseTensor) -> Result<bool> {
    let states = state_set(w);
    let cloud = StateCloud::from_characters(states.iter(), w.r());
    let pts = &cloud.points;
    let k = pts.len();
    let dim = pts[0].len();
    // constraints: sum_j w_j * pts[j] = 0 (dim rows), sum_j w_j = 1
    let mut a: Vec<Vec<Rat>> = (0..dim)
        .map(|d| pts.iter().map(|p| p[d].clone()).collect())
        .collect();
    a.push(vec![Rat::one(); k]);
    let mut b = vec![Rat::zero(); dim];
    b.push(Rat::one());
    for j in 0..k {
        let mut c = vec![Rat::zero(); k];
        c[j] = Rat::one();
        match simplex_max(&a, &b, &c) {
            None => return Ok(false),
            Some(v) if !v.is_positive() => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}

/// Outcome of the multi-start heuristic: the best within-torus result over
/// several moved frames, with the group element that produced it. The flag
/// is reported in the moved frame.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub result: InstabilityResult,
    /// Frame the result was computed in; `None` for the identity frame.
    pub frame: Option<Matrix>,
    pub restart_index: usize,
    /// The global search over all maximal tori is a heuristic; only the
    /// within-torus result per frame is exact.
    pub heuristic: bool,
}

fn random_unimodular(rng: &mut ChaCha8Rng, r: usize) -> Matrix {
    // product of elementary shears, determinant 1
    let mut g = identity_matrix(r);
    let shears = 2 * r;
    for _ in 0..shears {
        let i = rng.gen_range(0..r);
        let mut j = rng.gen_range(0..r - 1);
        if j >= i {
            j += 1;
        }
        let c: i64 = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
        // row_i += c * row_j
        for col in 0..r {
            let add = rat(c) * &g[j][col];
            g[i][col] += add;
        }
    }
    g
}

/// `nu^2`-comparison with sign: returns true if `a` is strictly more
/// destabilizing than `b` (more negative slope), by the radical-free
/// cross-multiplied predicate.
fn more_unstable(a: &InstabilityResult, b: &InstabilityResult) -> bool {
    match (a.verdict, b.verdict) {
        (Verdict::Unstable, Verdict::TorusSemistable) => true,
        (Verdict::TorusSemistable, _) => false,
        (Verdict::Unstable, Verdict::Unstable) => {
            let (qa, qb) = (a.q.unwrap(), b.q.unwrap());
            let na = norm_sq(a.lambda_star.as_ref().unwrap());
            let nb = norm_sq(b.lambda_star.as_ref().unwrap());
            // both q < 0: more negative nu iff q_a^2 * n_b > q_b^2 * n_a
            qa * qa * nb > qb * qb * na
        }
    }
}

/// Deterministic seeded multi-start: within-torus instability over the
/// identity frame and `restarts` pseudo-random unit-determinant rational
/// frames. Results are merged by the fixed total order (slope comparison,
/// then restart index), so the outcome is identical across runs.
pub fn kempf_search(w: &SparseTensor, restarts: usize, seed: u64) -> Result<SearchResult> {
    let base = torus_instability(w)?;
    let mut best = SearchResult {
        result: base,
        frame: None,
        restart_index: 0,
        heuristic: restarts > 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..restarts {
        let g = random_unimodular(&mut rng, w.r());
        let moved = act(&g, w)?;
        let res = torus_instability(&moved)?;
        if more_unstable(&res, &best.result) {
            best = SearchResult {
                result: res,
                frame: Some(g),
                restart_index: k + 1,
                heuristic: true,
            };
        }
    }
    Ok(best)
}

/// Block sizes and exponents of the instability character of a sum-zero
/// cocharacter: the Levi character `det(m_1)^{g_1} ... det(m_{s+1})^{g_{s+1}}`
/// with the distinct weights of `lambda` ascending, reported in flag order.
pub fn instability_character(lambda: &OnePS) -> Vec<(usize, i64)> {
    let n = lambda.rank();
    let mut sorted = lambda.weights.clone();
    sorted.sort_unstable();
    if lambda.is_trivial() {
        return vec![(n, 0)];
    }
    let mut out: Vec<(usize, i64)> = Vec::new();
    for w in sorted {
        match out.last_mut() {
            Some((size, val)) if *val == w => *size += 1,
            _ => out.push((1, w)),
        }
    }
    out
}

/// Pairs a sum-zero cocharacter against the instability character of
/// `lambda` by expanding block exponents to the full vector. Equals the
/// invariant pairing `(lambda', lambda)` of the two cocharacters.
pub fn character_pairing(lambda_prime: &OnePS, char_blocks: &[(usize, i64)]) -> i64 {
    let mut sorted = lambda_prime.weights.clone();
    sorted.sort_unstable();
    let mut acc = 0i64;
    let mut idx = 0usize;
    for &(size, exp) in char_blocks {
        for _ in 0..size {
            acc += sorted[idx] * exp;
            idx += 1;
        }
    }
    acc
}

/// The scaled destabilizing character: `q` times the exponents of the
/// instability character. Defined only for `mu(lambda, w) < 0`.
pub fn chi_star(lambda: &OnePS, w: &SparseTensor) -> Result<(i64, Vec<(usize, i64)>)> {
    let q = mu(lambda, w)?;
    if q >= 0 {
        return Err(Error::input(
            "chi_star requires mu(lambda, w) < 0 (unstable point)",
        ));
    }
    let blocks = instability_character(lambda)
        .into_iter()
        .map(|(size, exp)| (size, q * exp))
        .collect();
    Ok((q, blocks))
}

/// Degree of the character line bundle of a weighted filtration with trivial
/// total determinant: `- sum_i alpha_i * r * deg_i`.
pub fn deg_of_character_line(alphas: &[Rat], degrees: &[Rat], r: usize) -> Result<Rat> {
    if alphas.len() != degrees.len() {
        return Err(Error::input("one degree per alpha required"));
    }
    let rr = rat(r as i64);
    Ok(-alphas
        .iter()
        .zip(degrees)
        .fold(Rat::zero(), |acc, (a, d)| acc + a * &rr * d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{Component, DecType};
    use num::Zero;

    fn cloud(points: &[&[i64]]) -> StateCloud {
        StateCloud {
            points: points
                .iter()
                .map(|p| p.iter().map(|&x| rat(x)).collect())
                .collect(),
        }
    }

    fn tensor(r: usize, a: u32, c: u32, terms: &[(&[u8], i64)]) -> SparseTensor {
        SparseTensor::new(
            DecType::new_unchecked(r, vec![Component { a, b: 1, c }]),
            terms
                .iter()
                .map(|(mi, co)| ((0usize, 0usize, mi.to_vec()), rat(*co)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn min_norm_examples() {
        assert_eq!(
            min_norm_point(&cloud(&[&[2, -2]])).unwrap(),
            vec![rat(2), rat(-2)]
        );
        assert_eq!(
            min_norm_point(&cloud(&[&[1, 0], &[0, 1]])).unwrap(),
            vec![crate::rat::frac(1, 2), crate::rat::frac(1, 2)]
        );
        assert_eq!(
            min_norm_point(&cloud(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]])).unwrap(),
            vec![rat(0), rat(0)]
        );
        assert!(min_norm_point(&StateCloud { points: vec![] }).is_err());
    }

    #[test]
    fn torus_instability_examples() {
        let w = tensor(2, 2, 0, &[(&[1, 1], 1)]);
        let r = torus_instability(&w).unwrap();
        assert_eq!(r.verdict, Verdict::Unstable);
        assert_eq!(r.lambda_star.as_ref().unwrap().weights, vec![-1, 1]);
        assert_eq!(r.q, Some(-2));
        assert_eq!(r.m0_sq, Some(rat(2)));
        assert_eq!(r.flag.as_ref().unwrap().dims, vec![1]);

        let q = tensor(2, 2, 2, &[(&[1, 2], 1), (&[2, 1], 1)]);
        let r = torus_instability(&q).unwrap();
        assert_eq!(r.verdict, Verdict::TorusSemistable);

        // symmetric states {(1,-1),(-1,1)}
        let s = tensor(2, 2, 1, &[(&[1, 1], 1), (&[2, 2], 1)]);
        let r = torus_instability(&s).unwrap();
        assert_eq!(r.verdict, Verdict::TorusSemistable);
    }

    #[test]
    fn polystable_examples() {
        // single state projecting to 0
        let q = tensor(2, 2, 2, &[(&[1, 2], 1)]);
        assert!(torus_polystable(&q).unwrap());

        // states {(1,-1),(-1,1)}: 0 interior to the segment
        let s = tensor(2, 2, 1, &[(&[1, 1], 1), (&[2, 2], 1)]);
        assert!(torus_polystable(&s).unwrap());

        // single projected state (1,-1): 0 not in hull
        let w = tensor(2, 2, 0, &[(&[1, 1], 1)]);
        assert!(!torus_polystable(&w).unwrap());
    }

    #[test]
    fn polystable_boundary_not_interior() {
        // states projecting to {(1,-1),(-1,1),(1,-1)... } plus 0 on hull edge:
        // cloud {(1,-1),(0,0)} has 0 on the boundary of the hull but the
        // point (1,-1) never gets positive weight.
        let w = tensor(2, 2, 1, &[(&[1, 1], 1), (&[1, 2], 1)]);
        // states: (2,0)-(1,1)=(1,-1) and (1,1)-(1,1)=(0,0)
        assert!(!torus_polystable(&w).unwrap());
        assert_eq!(
            torus_instability(&w).unwrap().verdict,
            Verdict::TorusSemistable
        );
    }

    #[test]
    fn kempf_search_deterministic() {
        let w = tensor(2, 2, 0, &[(&[1, 1], 1)]);
        let r0 = kempf_search(&w, 0, 7).unwrap();
        assert_eq!(r0.result, torus_instability(&w).unwrap());
        assert!(!r0.heuristic);

        let r1 = kempf_search(&w, 5, 42).unwrap();
        let r2 = kempf_search(&w, 5, 42).unwrap();
        assert_eq!(r1.result, r2.result);
        assert_eq!(r1.restart_index, r2.restart_index);
        // T-adapted tensor: search never improves on the torus result
        assert_eq!(r1.result.m0_sq, r0.result.m0_sq);
    }

    #[test]
    fn instability_character_examples() {
        let l = OnePS::sl(vec![-2, 1, 1]).unwrap();
        let blocks = instability_character(&l);
        assert_eq!(blocks, vec![(1, -2), (2, 1)]);
        assert_eq!(character_pairing(&l, &blocks), 6);
        assert_eq!(character_pairing(&l, &blocks), norm_sq(&l));

        assert_eq!(instability_character(&OnePS::gl(vec![0, 0, 0])), vec![(3, 0)]);

        let l = OnePS::sl(vec![3, 1, -4]).unwrap();
        let blocks = instability_character(&l);
        assert_eq!(blocks, vec![(1, -4), (1, 1), (1, 3)]);
        let lp = OnePS::sl(vec![1, 0, -1]).unwrap();
        // <lp, l_T(l)> = (lp, l)* = 3*1 + 1*0 + (-4)*(-1) = 7
        assert_eq!(character_pairing(&lp, &blocks), 7);
    }

    #[test]
    fn chi_star_examples() {
        let w = tensor(2, 2, 0, &[(&[1, 1], 1)]);
        let l = OnePS::sl(vec![-1, 1]).unwrap();
        let (q, scaled) = chi_star(&l, &w).unwrap();
        assert_eq!(q, -2);
        assert_eq!(scaled, vec![(1, 2), (1, -2)]);

        // doubling lambda doubles q and exponents, quadrupling the product
        let l2 = OnePS::sl(vec![-2, 2]).unwrap();
        let (q2, scaled2) = chi_star(&l2, &w).unwrap();
        assert_eq!(q2, 2 * q);
        assert_eq!(scaled2, vec![(1, 8), (1, -8)]);

        let semi = tensor(2, 2, 2, &[(&[1, 2], 1), (&[2, 1], 1)]);
        assert!(chi_star(&l, &semi).is_err());
    }

    #[test]
    fn deg_of_character_line_examples() {
        assert_eq!(
            deg_of_character_line(&[rat(1)], &[rat(-2)], 3).unwrap(),
            rat(6)
        );
        assert_eq!(
            deg_of_character_line(
                &[crate::rat::frac(1, 2), crate::rat::frac(1, 4)],
                &[Rat::zero(), Rat::zero()],
                5
            )
            .unwrap(),
            Rat::zero()
        );
        assert_eq!(
            deg_of_character_line(&[rat(1)], &[rat(1)], 2).unwrap(),
            rat(-2)
        );
    }
}
