//! Numerical sheaf calculus: rank, degree and Hilbert polynomial data,
//! weighted filtrations, the polynomial and slope semistability functionals,
//! and verdicts for decorated objects over a finite candidate set.

use num::{One, Signed, Zero};

use crate::homogenize::{choose_omega, nu_filtration};
use crate::lattice::{dual_flag, WeightedFlag};
use crate::rat::{rat, Rat};
use crate::tensor::{mu_filtration_tensor, SparseTensor};
use crate::{Error, Result};

/// Rational polynomial, coefficients constant-first, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }
}

/// The polynomial order: nonnegative (or positive, for `strict`) on all
/// large arguments, i.e. lexicographic on coefficients from the top degree.
pub fn poly_positive(p: &Poly, strict: bool) -> bool {
    for c in p.coeffs.iter().rev() {
        if c.is_positive() {
            return true;
        }
        if c.is_negative() {
            return false;
        }
    }
    !strict
}

fn factorial(n: usize) -> Rat {
    (1..=n).fold(Rat::one(), |acc, k| acc * rat(k as i64))
}

/// The base space reduced to its dimension and the Hilbert polynomial of its
/// structure sheaf, which normalizes how degrees sit inside Hilbert
/// polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientSpace {
    pub dim_x: usize,
    pub hilbert_of_structure_sheaf: Poly,
}

impl AmbientSpace {
    pub fn new(dim_x: usize, hilbert_of_structure_sheaf: Poly) -> Result<Self> {
        if dim_x == 0 {
            return Err(Error::input("ambient dimension must be positive"));
        }
        if hilbert_of_structure_sheaf.degree() != Some(dim_x) {
            return Err(Error::input(
                "structure sheaf polynomial degree must equal the ambient dimension",
            ));
        }
        if !hilbert_of_structure_sheaf.leading().is_positive() {
            return Err(Error::input("structure sheaf leading coefficient must be positive"));
        }
        Ok(AmbientSpace {
            dim_x,
            hilbert_of_structure_sheaf,
        })
    }
}

/// Numerical invariants of a torsion-free sheaf. Consistency against an
/// ambient space requires
/// `(d-1)! * (coeff_{d-1}(P) - rank * coeff_{d-1}(P_O)) = degree` and the
/// leading coefficient to be exactly `rank` times that of the structure
/// sheaf; the latter pins the top coefficient of the `M` functional to zero,
/// which the slope comparison relies on.
#[derive(Clone, Debug, PartialEq)]
pub struct SheafData {
    pub rank: usize,
    pub degree: Rat,
    pub hilbert: Poly,
}

impl SheafData {
    pub fn validate(&self, ambient: &AmbientSpace) -> Result<()> {
        let d = ambient.dim_x;
        if self.rank == 0 {
            return Err(Error::input("sheaf rank must be positive"));
        }
        if self.hilbert.degree() != Some(d) {
            return Err(Error::input("Hilbert polynomial degree must equal dim of the base"));
        }
        let lead_o = ambient.hilbert_of_structure_sheaf.leading();
        if self.hilbert.leading() != rat(self.rank as i64) * &lead_o {
            return Err(Error::input(
                "leading coefficient must be rank times the structure sheaf's",
            ));
        }
        let extracted = factorial(d - 1)
            * (self.hilbert.coeff(d - 1)
                - rat(self.rank as i64) * ambient.hilbert_of_structure_sheaf.coeff(d - 1));
        if extracted != self.degree {
            return Err(Error::input(format!(
                "degree {} does not match the subleading Hilbert coefficient (extracted {})",
                crate::rat::rat_to_string(&self.degree),
                crate::rat::rat_to_string(&extracted),
            )));
        }
        Ok(())
    }

    /// The proportional subsheaf data of a given rank: degree and Hilbert
    /// polynomial scaled by `rank' / rank`.
    pub fn proportional(&self, rank: usize) -> SheafData {
        let f = rat(rank as i64) / rat(self.rank as i64);
        SheafData {
            rank,
            degree: &self.degree * &f,
            hilbert: self.hilbert.scale(&f),
        }
    }
}

/// An ascending chain of proper subsheaves of `total` with positive weights.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedFiltration {
    pub steps: Vec<SheafData>,
    pub alphas: Vec<Rat>,
    pub total: SheafData,
}

impl WeightedFiltration {
    pub fn new(steps: Vec<SheafData>, alphas: Vec<Rat>, total: SheafData) -> Result<Self> {
        if steps.len() != alphas.len() {
            return Err(Error::input("one weight per filtration step required"));
        }
        if alphas.iter().any(|a| !a.is_positive()) {
            return Err(Error::input("filtration weights must be positive"));
        }
        let mut prev = 0usize;
        for s in &steps {
            if s.rank <= prev || s.rank >= total.rank {
                return Err(Error::input(
                    "step ranks must be strictly increasing and below the total rank",
                ));
            }
            prev = s.rank;
        }
        Ok(WeightedFiltration { steps, alphas, total })
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.rank).collect()
    }
}

/// `M(f) = sum_i alpha_i * (P * rk_i - P_i * r)`, exact coefficients.
pub fn m_poly(f: &WeightedFiltration) -> Poly {
    let r = rat(f.total.rank as i64);
    let mut acc = Poly::zero();
    for (s, a) in f.steps.iter().zip(&f.alphas) {
        let term = f
            .total
            .hilbert
            .scale(&rat(s.rank as i64))
            .sub(&s.hilbert.scale(&r));
        acc = acc.add(&term.scale(a));
    }
    acc
}

/// `L(f) = sum_i alpha_i * (rk_i * deg(A) - r * deg_i)`.
pub fn l_slope(f: &WeightedFiltration) -> Rat {
    let r = rat(f.total.rank as i64);
    f.steps
        .iter()
        .zip(&f.alphas)
        .fold(Rat::zero(), |acc, (s, a)| {
            acc + a * (rat(s.rank as i64) * &f.total.degree - &r * &s.degree)
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    SemistableOnly,
    Unstable,
}

/// Outcome of a candidate sweep. `witness` is the lowest-index candidate
/// responsible for the verdict: the destabilizing one when unstable, the
/// first boundary case when semistable only.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub witness: Option<usize>,
    /// Candidate indices actually tested (all of them for the decorated
    /// check, the value-zero reductions for the honest and slope checks).
    pub considered: Vec<usize>,
    /// True when epsilon had degree exactly `d - 1`; always true for checks
    /// that take no epsilon.
    pub epsilon_degree_exact: bool,
}

fn sweep<F: FnMut(usize) -> (bool, bool)>(
    indices: &[usize],
    mut test: F,
    epsilon_degree_exact: bool,
) -> CheckReport {
    // test returns (weak, strict) for a candidate
    let mut boundary: Option<usize> = None;
    for &i in indices {
        let (weak, strict) = test(i);
        if !weak {
            return CheckReport {
                verdict: Verdict::Unstable,
                witness: Some(i),
                considered: indices.to_vec(),
                epsilon_degree_exact,
            };
        }
        if !strict && boundary.is_none() {
            boundary = Some(i);
        }
    }
    match boundary {
        Some(i) => CheckReport {
            verdict: Verdict::SemistableOnly,
            witness: Some(i),
            considered: indices.to_vec(),
            epsilon_degree_exact,
        },
        None => CheckReport {
            verdict: Verdict::Stable,
            witness: None,
            considered: indices.to_vec(),
            epsilon_degree_exact,
        },
    }
}

/// A rank-`r` degree-zero sheaf with a tensor decoration on its generic
/// fibre and a finite list of candidate filtrations, each paired with the
/// fibre flag dual to its step ranks.
#[derive(Clone, Debug)]
pub struct DecoratedObject {
    pub ambient: AmbientSpace,
    pub total: SheafData,
    pub tensor: SparseTensor,
    pub candidates: Vec<(WeightedFiltration, WeightedFlag)>,
}

impl DecoratedObject {
    pub fn new(
        ambient: AmbientSpace,
        total: SheafData,
        tensor: SparseTensor,
        candidates: Vec<(WeightedFiltration, WeightedFlag)>,
    ) -> Result<Self> {
        total.validate(&ambient)?;
        if !total.degree.is_zero() {
            return Err(Error::input("decorated objects must have degree zero"));
        }
        if tensor.r() != total.rank {
            return Err(Error::input("tensor rank does not match the sheaf rank"));
        }
        for (f, flag) in &candidates {
            if f.total != total {
                return Err(Error::input("filtration total must match the object"));
            }
            for s in &f.steps {
                s.validate(&ambient)?;
            }
            let (dual_dims, dual_alphas) =
                dual_flag(&f.ranks(), &f.alphas, total.rank)?;
            if flag.dims != dual_dims || flag.alphas != dual_alphas {
                return Err(Error::input(
                    "candidate flag must be the dual of the filtration ranks and weights",
                ));
            }
        }
        Ok(DecoratedObject {
            ambient,
            total,
            tensor,
            candidates,
        })
    }

    fn all_indices(&self) -> Vec<usize> {
        (0..self.candidates.len()).collect()
    }

    /// Candidates whose tensor-side filtration value vanishes; these model
    /// the reductions of the structure group.
    pub fn reduction_indices(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, (_, flag)) in self.candidates.iter().enumerate() {
            if mu_filtration_tensor(flag, &self.tensor)?.is_zero() {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// The homogenized decoration weight of a candidate flag: direct value
    /// over the common degree when the type is homogeneous, the tuple
    /// calculus otherwise.
    pub fn nu_of(&self, flag: &WeightedFlag) -> Result<Rat> {
        let vs = self.tensor.dec_type.v_values();
        if self.tensor.dec_type.is_homogeneous() {
            let v = vs[0].abs();
            if v == 0 {
                return Err(Error::input(
                    "decoration type has a - r*c = 0; no weight normalization exists",
                ));
            }
            Ok(mu_filtration_tensor(flag, &self.tensor)? / rat(v))
        } else if vs.iter().all(|&v| v > 0) {
            let plan = choose_omega(&self.tensor.dec_type, 1)?;
            nu_filtration(flag, &self.tensor, &plan)
        } else {
            Err(Error::input(
                "mixed decoration types must have positive a - r*c per component",
            ))
        }
    }
}

/// Tests `M + epsilon * nu (>=) 0` over all candidates. `epsilon` must have
/// positive leading coefficient and degree at most `d - 1`; degree exactly
/// `d - 1` is the strong form, lower degrees are accepted and flagged in the
/// report.
pub fn check_decorated(obj: &DecoratedObject, epsilon: &Poly) -> Result<CheckReport> {
    let d = obj.ambient.dim_x;
    if epsilon.is_zero() || !epsilon.leading().is_positive() {
        return Err(Error::input("epsilon must be nonzero with positive leading coefficient"));
    }
    let eps_deg = epsilon.degree().unwrap();
    if eps_deg > d - 1 {
        return Err(Error::input("epsilon degree must be at most dim(X) - 1"));
    }
    let mut tests = Vec::new();
    for (f, flag) in &obj.candidates {
        let nu = obj.nu_of(flag)?;
        let p = m_poly(f).add(&epsilon.scale(&nu));
        tests.push((poly_positive(&p, false), poly_positive(&p, true)));
    }
    Ok(sweep(&obj.all_indices(), |i| tests[i], eps_deg == d - 1))
}

/// Semistability against reductions only: candidates with vanishing
/// filtration value, compared by the polynomial functional.
pub fn check_honest(obj: &DecoratedObject) -> Result<CheckReport> {
    let idx = obj.reduction_indices()?;
    let tests: Vec<(bool, bool)> = obj
        .candidates
        .iter()
        .map(|(f, _)| {
            let m = m_poly(f);
            (poly_positive(&m, false), poly_positive(&m, true))
        })
        .collect();
    Ok(sweep(&idx, |i| tests[i], true))
}

/// As `check_honest` with the slope functional `L` in place of `M`.
pub fn check_slope(obj: &DecoratedObject) -> Result<CheckReport> {
    let idx = obj.reduction_indices()?;
    let tests: Vec<(bool, bool)> = obj
        .candidates
        .iter()
        .map(|(f, _)| {
            let l = l_slope(f);
            (!l.is_negative(), l.is_positive())
        })
        .collect();
    Ok(sweep(&idx, |i| tests[i], true))
}

/// The four verdicts in implication order, plus the per-reduction identity
/// `(d-1)! * coeff_{d-1}(M) = L`. Both the identity and the monotone chain
/// are theorems of the comparators; a failure is reported as an internal
/// error, never as a property of the input.
#[derive(Clone, Debug, PartialEq)]
pub struct ImplicationReport {
    pub slope_stable: bool,
    pub stable: bool,
    pub semistable: bool,
    pub slope_semistable: bool,
    /// Per reduction index: `(index, coefficient identity holds)`.
    pub coeff_checks: Vec<(usize, bool)>,
}

pub fn implication_report(obj: &DecoratedObject) -> Result<ImplicationReport> {
    let honest = check_honest(obj)?;
    let slope = check_slope(obj)?;
    let d = obj.ambient.dim_x;
    let mut coeff_checks = Vec::new();
    for &i in &honest.considered {
        let (f, _) = &obj.candidates[i];
        let lhs = factorial(d - 1) * m_poly(f).coeff(d - 1);
        let ok = lhs == l_slope(f);
        coeff_checks.push((i, ok));
        if !ok {
            return Err(Error::certificate(format!(
                "subleading coefficient of M disagrees with L on candidate {i}"
            )));
        }
    }
    let report = ImplicationReport {
        slope_stable: slope.verdict == Verdict::Stable,
        stable: honest.verdict == Verdict::Stable,
        semistable: honest.verdict != Verdict::Unstable,
        slope_semistable: slope.verdict != Verdict::Unstable,
        coeff_checks,
    };
    let chain = [
        report.slope_stable,
        report.stable,
        report.semistable,
        report.slope_semistable,
    ];
    if chain.windows(2).any(|w| w[0] && !w[1]) {
        return Err(Error::certificate(
            "verdict chain is not monotone; comparator bug",
        ));
    }
    Ok(report)
}
