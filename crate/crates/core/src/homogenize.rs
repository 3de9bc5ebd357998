//! Homogenization of mixed-degree decorations: degree tuples for a common
//! multiple `omega`, the closed-form and explicit product constructions of
//! the homogenized tensor, the `nu` functional, and its sign agreement with
//! the direct filtration value.

use num::Zero;

use crate::lattice::WeightedFlag;
use crate::rat::{rat, sign, Rat};
use crate::tensor::{
    mu_filtration_components, mu_filtration_tensor, Component, DecType, SparseTensor, TermKey,
};
use crate::{Error, Result};

/// Term-count cap for the explicit product construction; beyond it only the
/// closed form is evaluated.
pub const EXPLICIT_TERM_CAP: usize = 20_000;

/// Degree data for homogenizing a fixed inhomogeneous type: the distinct
/// positive degrees `v_1 < ... < v_m`, a common multiple `omega`, every
/// nonnegative tuple with `sum v_j d_j = omega`, and a target type
/// `(A, B, C)` with `A - r C = -omega` large enough to receive all products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogenizationPlan {
    pub source: DecType,
    pub v_values: Vec<i64>,
    pub omega: i64,
    pub tuples: Vec<Vec<i64>>,
    /// `(A, B, C)`: `A` the slot count of the receiving type, `B` the number
    /// of product monomial slots (bookkeeping), `C` the determinant twist.
    pub target_type: (i64, i64, i64),
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

fn enumerate_tuples(v: &[i64], omega: i64) -> Vec<Vec<i64>> {
    // first coordinate descending, matching the concentration-first reading
    let mut out = Vec::new();
    let mut cur = vec![0i64; v.len()];
    fn rec(v: &[i64], rest: i64, j: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if j == v.len() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let max_d = rest / v[j];
        for d in (0..=max_d).rev() {
            cur[j] = d;
            rec(v, rest - d * v[j], j + 1, cur, out);
        }
        cur[j] = 0;
    }
    rec(v, omega, 0, &mut cur, &mut out);
    out
}

/// Builds the homogenization data for an inhomogeneous type. `omega` is
/// `k` times the least common multiple of the degrees; `nu` is independent
/// of `k`, which exists only to make that observable.
pub fn choose_omega(t: &DecType, k: i64) -> Result<HomogenizationPlan> {
    if k < 1 {
        return Err(Error::input("omega multiplier k must be >= 1"));
    }
    let vs = t.v_values();
    if vs.iter().any(|&v| v <= 0) {
        return Err(Error::input(
            "homogenization requires every component degree a - r*c to be positive",
        ));
    }
    let mut v_values: Vec<i64> = vs.clone();
    v_values.sort_unstable();
    v_values.dedup();
    let omega = k * v_values.iter().copied().fold(1, lcm);
    let tuples = enumerate_tuples(&v_values, omega);

    let r = t.r as i64;
    // largest total slot count over all product choices
    let max_a_prod = tuples
        .iter()
        .map(|d| {
            d.iter()
                .zip(&v_values)
                .map(|(&dj, &vj)| {
                    let amax = t
                        .components
                        .iter()
                        .filter(|c| c.a as i64 - r * c.c as i64 == vj)
                        .map(|c| c.a as i64)
                        .max()
                        .unwrap_or(0);
                    dj * amax
                })
                .sum::<i64>()
        })
        .max()
        .unwrap_or(0);
    // smallest A > 0 with A = r*C - omega and room for every product padded
    // into the receiving type
    let mut a_target = (r - 1) * max_a_prod;
    if a_target < 1 {
        a_target = 1;
    }
    while (a_target + omega) % r != 0 {
        a_target += 1;
    }
    let c_target = (a_target + omega) / r;
    let b_target: i64 = tuples
        .iter()
        .map(|d| {
            d.iter()
                .zip(&v_values)
                .map(|(&dj, &vj)| {
                    let slots: i64 = t
                        .components
                        .iter()
                        .filter(|c| c.a as i64 - r * c.c as i64 == vj)
                        .map(|c| c.b as i64)
                        .sum();
                    slots.pow(dj as u32)
                })
                .product::<i64>()
        })
        .sum();

    Ok(HomogenizationPlan {
        source: t.clone(),
        v_values,
        omega,
        tuples,
        target_type: (a_target, b_target, c_target),
    })
}

/// Per-degree best component values: `mu_tilde[j]` is the maximum of the
/// filtration value over nonempty components of degree `v_j`, `None` when
/// every such component is empty.
fn mu_tilde(flag: &WeightedFlag, w: &SparseTensor, plan: &HomogenizationPlan) -> Result<Vec<Option<Rat>>> {
    let comp_mu = mu_filtration_components(flag, w)?;
    let vs = w.dec_type.v_values();
    let mut out: Vec<Option<Rat>> = vec![None; plan.v_values.len()];
    for (i, m) in comp_mu.into_iter().enumerate() {
        let Some(m) = m else { continue };
        let j = plan
            .v_values
            .iter()
            .position(|&v| v == vs[i])
            .expect("component degree listed in plan");
        out[j] = Some(match out[j].take() {
            None => m,
            Some(b) => b.max(m),
        });
    }
    Ok(out)
}

/// Closed form for the filtration value of the homogenized tensor: the
/// maximum over admissible tuples of `sum_j d_j * mu_tilde_j`. A tuple is
/// admissible when every degree it draws on has a nonempty component.
fn mu_hat_closed(flag: &WeightedFlag, w: &SparseTensor, plan: &HomogenizationPlan) -> Result<Rat> {
    let tilde = mu_tilde(flag, w, plan)?;
    let mut best: Option<Rat> = None;
    for d in &plan.tuples {
        let mut sum = Rat::zero();
        let mut ok = true;
        for (j, &dj) in d.iter().enumerate() {
            if dj == 0 {
                continue;
            }
            match &tilde[j] {
                Some(m) => sum += rat(dj) * m,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            best = Some(match best {
                None => sum,
                Some(b) => b.max(sum),
            });
        }
    }
    best.ok_or_else(|| Error::input("no admissible degree tuple for this tensor"))
}

/// Builds the homogenized tensor explicitly: one receiving component per
/// tuple and ordered factor choice, terms given by all products of factor
/// terms. Copy indices encode the factor copy choices, so distinct products
/// occupy distinct basis vectors and never cancel; the filtration value is
/// therefore exactly the closed form. Returns `None` when the term count
/// exceeds `EXPLICIT_TERM_CAP`.
pub fn build_explicit(w: &SparseTensor, plan: &HomogenizationPlan) -> Result<Option<SparseTensor>> {
    if w.dec_type != plan.source {
        return Err(Error::input("tensor type does not match homogenization plan"));
    }
    let vs = w.dec_type.v_values();
    let nonempty: Vec<usize> = (0..w.dec_type.components.len())
        .filter(|&i| w.terms.keys().any(|k| k.0 == i))
        .collect();

    let mut components: Vec<Component> = Vec::new();
    let mut terms: Vec<(TermKey, Rat)> = Vec::new();

    for d in &plan.tuples {
        // bail out before materializing an oversized selection list
        let mut projected: u128 = 1;
        for (j, &dj) in d.iter().enumerate() {
            let pool_size = nonempty
                .iter()
                .filter(|&&i| vs[i] == plan.v_values[j])
                .count() as u128;
            if dj > 0 && pool_size > 0 {
                projected = projected.saturating_mul(pool_size.saturating_pow(dj as u32));
            }
        }
        if projected > EXPLICIT_TERM_CAP as u128 {
            return Ok(None);
        }

        // ordered factor lists drawing d_j components of degree v_j
        let mut selections: Vec<Vec<usize>> = vec![Vec::new()];
        let mut admissible = true;
        for (j, &dj) in d.iter().enumerate() {
            if dj == 0 {
                continue;
            }
            let pool: Vec<usize> = nonempty
                .iter()
                .copied()
                .filter(|&i| vs[i] == plan.v_values[j])
                .collect();
            if pool.is_empty() {
                admissible = false;
                break;
            }
            for _ in 0..dj {
                let mut next = Vec::new();
                for sel in &selections {
                    for &p in &pool {
                        let mut s = sel.clone();
                        s.push(p);
                        next.push(s);
                    }
                }
                selections = next;
            }
        }
        if !admissible {
            continue;
        }
        for sel in selections {
            let comp_id = components.len();
            let mut a = 0u32;
            let mut c = 0u32;
            let mut b = 1u32;
            for &f in &sel {
                let fc = w.dec_type.components[f];
                a += fc.a;
                c += fc.c;
                b = b.saturating_mul(fc.b);
            }
            components.push(Component { a, b, c });

            // cartesian product of factor terms; copy = mixed-radix code of
            // the factor copies (base b_f per factor)
            let mut partial: Vec<(usize, Vec<u8>, Rat)> = vec![(0, Vec::new(), num::One::one())];
            for &f in &sel {
                let fb = w.dec_type.components[f].b as usize;
                let fterms: Vec<(&TermKey, &Rat)> =
                    w.terms.iter().filter(|(k, _)| k.0 == f).collect();
                let mut next = Vec::new();
                for (copy_code, mi, coeff) in &partial {
                    for (k, fc) in &fterms {
                        let mut m = mi.clone();
                        m.extend_from_slice(&k.2);
                        next.push((copy_code * fb + k.1, m, coeff * *fc));
                    }
                }
                partial = next;
                if terms.len() + partial.len() > EXPLICIT_TERM_CAP {
                    return Ok(None);
                }
            }
            for (copy, mi, coeff) in partial {
                terms.push(((comp_id, copy, mi), coeff));
            }
        }
    }
    let dec = DecType::new_unchecked(w.r(), components);
    Ok(Some(SparseTensor::new(dec, terms)?))
}

/// The homogenized semistability weight `nu = mu(flag; homogenized) / omega`,
/// computed by the closed form and, when small enough, cross-checked against
/// the explicit product tensor.
pub fn nu_filtration(
    flag: &WeightedFlag,
    w: &SparseTensor,
    plan: &HomogenizationPlan,
) -> Result<Rat> {
    if w.dec_type != plan.source {
        return Err(Error::input("tensor type does not match homogenization plan"));
    }
    let closed = mu_hat_closed(flag, w, plan)?;
    let nu = &closed / rat(plan.omega);
    if let Some(hat) = build_explicit(w, plan)? {
        let explicit = mu_filtration_tensor(flag, &hat)? / rat(plan.omega);
        if explicit != nu {
            return Err(Error::certificate(format!(
                "nu routes disagree: closed {nu} vs explicit {explicit}"
            )));
        }
    }
    Ok(nu)
}

/// Signs of the direct filtration value (maximum over components) and of
/// `nu`; they agree for every input, and the pair is returned for audit.
pub fn sign_equiv_check(
    flag: &WeightedFlag,
    w: &SparseTensor,
    plan: &HomogenizationPlan,
) -> Result<(i32, i32, bool)> {
    let comp_mu = mu_filtration_components(flag, w)?;
    let direct = comp_mu
        .into_iter()
        .flatten()
        .max()
        .ok_or_else(|| Error::input("mu of the zero tensor is undefined"))?;
    let nu = nu_filtration(flag, w, plan)?;
    let (sm, sn) = (sign(&direct), sign(&nu));
    Ok((sm, sn, sm == sn))
}

/// Checks the one-step bound for the homogenized tensor: for every flag
/// `dims = [k]`, `alpha = 1`, the filtration value is at most `A (r - 1)`
/// with `A` from the plan's target type. A violation is a bug signal, never
/// a property of the input.
pub fn saturation_bound_check(
    w: &SparseTensor,
    plan: &HomogenizationPlan,
) -> Result<(Rat, Rat, bool)> {
    let r = w.r();
    let mut max_mu: Option<Rat> = None;
    for k in 1..r {
        let flag = WeightedFlag::new(r, vec![k], vec![num::One::one()])?;
        let m = mu_hat_closed(&flag, w, plan)?;
        max_mu = Some(match max_mu {
            None => m,
            Some(b) => b.max(m),
        });
    }
    let max_mu = max_mu.ok_or_else(|| Error::input("rank must be at least 2"))?;
    let bound = rat(plan.target_type.0 * (r as i64 - 1));
    let ok = max_mu <= bound;
    Ok((max_mu, bound, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::frac;
    use crate::tensor::SparseTensor;

    fn two_degree_tensor() -> SparseTensor {
        // degree-1 component b1 (value -1 on the dims=[1] flag), degree-2
        // component b2 (x) b2 (value 2)
        let dec = DecType::new(
            2,
            vec![Component { a: 1, b: 1, c: 0 }, Component { a: 2, b: 1, c: 0 }],
        )
        .unwrap();
        SparseTensor::new(
            dec,
            vec![
                ((0, 0, vec![1]), rat(1)),
                ((1, 0, vec![2, 2]), rat(1)),
            ],
        )
        .unwrap()
    }

    fn step_flag(r: usize, k: usize) -> WeightedFlag {
        WeightedFlag::new(r, vec![k], vec![rat(1)]).unwrap()
    }

    #[test]
    fn choose_omega_examples() {
        let t = DecType::new(2, vec![Component { a: 3, b: 1, c: 0 }]).unwrap();
        let p = choose_omega(&t, 1).unwrap();
        assert_eq!(p.v_values, vec![3]);
        assert_eq!(p.omega, 3);
        assert_eq!(p.tuples, vec![vec![1]]);

        let t = DecType::new(
            2,
            vec![Component { a: 1, b: 1, c: 0 }, Component { a: 2, b: 1, c: 0 }],
        )
        .unwrap();
        let p = choose_omega(&t, 1).unwrap();
        assert_eq!(p.v_values, vec![1, 2]);
        assert_eq!(p.omega, 2);
        assert_eq!(p.tuples, vec![vec![2, 0], vec![0, 1]]);
        let (a, _, c) = p.target_type;
        assert_eq!(a - 2 * c, -p.omega);
        assert!(a > 0 && c > 0);

        let t = DecType::new(
            3,
            vec![Component { a: 2, b: 1, c: 0 }, Component { a: 3, b: 1, c: 0 }],
        )
        .unwrap();
        let p = choose_omega(&t, 1).unwrap();
        assert_eq!(p.omega, 6);
        assert_eq!(p.tuples, vec![vec![3, 0], vec![0, 2]]);
        assert_eq!((p.target_type.0 + p.omega) % 3, 0);

        let bad = DecType::new_unchecked(2, vec![Component { a: 1, b: 1, c: 1 }]);
        assert!(choose_omega(&bad, 1).is_err());
        assert!(choose_omega(&t, 0).is_err());
    }

    #[test]
    fn nu_examples() {
        let w = two_degree_tensor();
        let plan = choose_omega(&w.dec_type, 1).unwrap();
        let flag = step_flag(2, 1);
        // mu_tilde = (-1, 2); tuples (2,0) -> -2, (0,1) -> 2; nu = 2/2
        assert_eq!(nu_filtration(&flag, &w, &plan).unwrap(), rat(1));

        // all-zero component values
        let dec = DecType::new(2, vec![Component { a: 2, b: 1, c: 0 }]).unwrap();
        let q = SparseTensor::new(
            dec,
            vec![((0, 0, vec![1, 2]), rat(1)), ((0, 0, vec![2, 1]), rat(1))],
        )
        .unwrap();
        let plan = choose_omega(&q.dec_type, 1).unwrap();
        assert_eq!(nu_filtration(&flag, &q, &plan).unwrap(), rat(0));

        // single component, value -3, v = 3
        let dec = DecType::new(2, vec![Component { a: 3, b: 1, c: 0 }]).unwrap();
        let s = SparseTensor::new(dec, vec![((0, 0, vec![1, 1, 1]), rat(1))]).unwrap();
        let plan = choose_omega(&s.dec_type, 1).unwrap();
        assert_eq!(nu_filtration(&flag, &s, &plan).unwrap(), rat(-1));
    }

    #[test]
    fn nu_omega_stability() {
        let w = two_degree_tensor();
        let flag = step_flag(2, 1);
        let base = nu_filtration(&flag, &w, &choose_omega(&w.dec_type, 1).unwrap()).unwrap();
        for k in [2, 3, 5] {
            let plan = choose_omega(&w.dec_type, k).unwrap();
            assert_eq!(plan.omega, 2 * k);
            assert_eq!(nu_filtration(&flag, &w, &plan).unwrap(), base);
        }
    }

    #[test]
    fn nu_fractional_flag() {
        let w = two_degree_tensor();
        let plan = choose_omega(&w.dec_type, 1).unwrap();
        let flag = WeightedFlag::new(2, vec![1], vec![frac(1, 3)]).unwrap();
        // component values scale by 1/3
        assert_eq!(nu_filtration(&flag, &w, &plan).unwrap(), frac(1, 3));
    }

    #[test]
    fn sign_equiv_examples() {
        let w = two_degree_tensor();
        let plan = choose_omega(&w.dec_type, 1).unwrap();
        let flag = step_flag(2, 1);
        assert_eq!(sign_equiv_check(&flag, &w, &plan).unwrap(), (1, 1, true));

        // both components nonpositive, one zero: signs (0, 0)
        let dec = DecType::new(
            2,
            vec![Component { a: 1, b: 1, c: 0 }, Component { a: 2, b: 1, c: 0 }],
        )
        .unwrap();
        let q = SparseTensor::new(
            dec.clone(),
            vec![((0, 0, vec![1]), rat(1)), ((1, 0, vec![1, 2]), rat(1))],
        )
        .unwrap();
        let plan = choose_omega(&dec, 1).unwrap();
        assert_eq!(sign_equiv_check(&flag, &q, &plan).unwrap(), (0, 0, true));

        // all components negative
        let neg = SparseTensor::new(
            dec.clone(),
            vec![((0, 0, vec![1]), rat(1)), ((1, 0, vec![1, 1]), rat(1))],
        )
        .unwrap();
        assert_eq!(sign_equiv_check(&flag, &neg, &plan).unwrap(), (-1, -1, true));
    }

    #[test]
    fn empty_component_tuples_skipped() {
        // degree-1 component carries no terms: only the concentration tuple
        // on degree 2 is admissible
        let dec = DecType::new(
            2,
            vec![Component { a: 1, b: 1, c: 0 }, Component { a: 2, b: 1, c: 0 }],
        )
        .unwrap();
        let w = SparseTensor::new(dec.clone(), vec![((1, 0, vec![2, 2]), rat(1))]).unwrap();
        let plan = choose_omega(&dec, 1).unwrap();
        let flag = step_flag(2, 1);
        assert_eq!(nu_filtration(&flag, &w, &plan).unwrap(), rat(1));
    }

    #[test]
    fn explicit_build_shape() {
        let w = two_degree_tensor();
        let plan = choose_omega(&w.dec_type, 1).unwrap();
        let hat = build_explicit(&w, &plan).unwrap().unwrap();
        // tuple (2,0): one selection (comp0, comp0), one product term b1 (x) b1;
        // tuple (0,1): comp1, term b2 (x) b2
        assert_eq!(hat.dec_type.components.len(), 2);
        assert_eq!(hat.terms.len(), 2);
        for comp in &hat.dec_type.components {
            assert_eq!(comp.a as i64 - 2 * comp.c as i64, plan.omega);
        }
    }

    #[test]
    fn saturation_examples() {
        let w = two_degree_tensor();
        let plan = choose_omega(&w.dec_type, 1).unwrap();
        let (max_mu, bound, ok) = saturation_bound_check(&w, &plan).unwrap();
        assert!(ok);
        assert_eq!(max_mu, rat(2));
        // r = 2: bound is A itself
        assert_eq!(bound, rat(plan.target_type.0));
    }
}
