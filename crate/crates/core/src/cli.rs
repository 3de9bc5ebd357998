//! Command-line front end: versioned JSON problem files in, deterministic
//! JSON documents out. All rationals travel as `"p/q"` strings or JSON
//! integers; no floating point exists anywhere in the interchange format.
//!
//! Exit codes: 0 on success (verdicts are data, not exit codes), 2 for
//! malformed input, 3 for an internal certificate failure, which always
//! indicates a bug.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::homogenize::{choose_omega, nu_filtration, saturation_bound_check, sign_equiv_check};
use crate::kempf::{
    chi_star, instability_character, kempf_search, torus_instability, torus_polystable,
    InstabilityResult, Verdict,
};
use crate::lattice::{dual_flag, weighted_flag_of, OnePS, WeightedFlag};
use crate::oracles::{
    adjoint_example, brute_force_instability, laurent_orbit, orthogonal_example, OrthBasis,
};
use crate::rat::{rat, rat_from_json, rat_to_string, Rat};
use crate::sheafcalc::{
    check_decorated, check_honest, check_slope, implication_report, m_poly, l_slope, AmbientSpace,
    CheckReport, DecoratedObject, Poly, SheafData, WeightedFiltration,
    Verdict as SheafVerdict,
};
use crate::tensor::{mu, mu_filtration_tensor, Component, DecType, SparseTensor, TermKey};
use crate::{Error, Result};

pub const FORMAT_VERSION: &str = "gitstab/1";

#[derive(Parser)]
#[command(name = "gitstab", version, about = "Exact semistability calculations for decorated tensors and sheaves")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pairing table: mu(lambda, tensor) for every lambda in the file
    Mu { file: PathBuf },
    /// Weighted flags of the file's one-parameter subgroups
    Flag { file: PathBuf },
    /// Optimal destabilizing direction within the standard torus
    Kempf {
        file: PathBuf,
        /// extra pseudo-random frames to search (heuristic)
        #[arg(long, default_value_t = 0)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// cross-check against exhaustive box search
        #[arg(long)]
        brute_box: Option<i64>,
    },
    /// Instability characters and their scaled forms
    Char { file: PathBuf },
    /// Semistability verdicts over the file's candidate filtrations
    Check {
        file: PathBuf,
        #[arg(long)]
        mode: CheckMode,
    },
    /// Homogenization plan, nu values, and sign audit
    Homogenize {
        file: PathBuf,
        /// omega multiplier k (omega = k * lcm of the degrees)
        #[arg(long, default_value_t = 1)]
        multiplier: i64,
    },
    /// Slow-path dumps: graded orbit pieces and optional box search
    Oracle {
        file: PathBuf,
        #[arg(long)]
        brute_box: Option<i64>,
    },
    /// Write the bundled example problem files
    Examples {
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckMode {
    Decorated,
    Honest,
    Slope,
    Chain,
}

/// Entry point for the binary; returns the process exit code.
pub fn main_from_args<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version through this path as well
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli.command) {
        Ok(doc) => {
            println!("{}", to_canonical_string(&doc));
            0
        }
        Err(Error::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Error::Certificate(msg)) => {
            eprintln!("internal error: {msg}");
            3
        }
    }
}

/// Pretty JSON with sorted keys (the serde_json map is ordered), one
/// trailing newline added by the caller.
fn to_canonical_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializing a finite document")
}

fn run(cmd: &Command) -> Result<Value> {
    match cmd {
        Command::Mu { file } => cmd_mu(&load(file)?),
        Command::Flag { file } => cmd_flag(&load(file)?),
        Command::Kempf {
            file,
            restarts,
            seed,
            brute_box,
        } => cmd_kempf(&load(file)?, *restarts, *seed, *brute_box),
        Command::Char { file } => cmd_char(&load(file)?),
        Command::Check { file, mode } => cmd_check(&load(file)?, *mode),
        Command::Homogenize { file, multiplier } => cmd_homogenize(&load(file)?, *multiplier),
        Command::Oracle { file, brute_box } => cmd_oracle(&load(file)?, *brute_box),
        Command::Examples { out_dir } => cmd_examples(out_dir),
    }
}

/// Everything a problem file may carry; each command checks for the
/// sections it needs.
pub struct Problem {
    pub dec_type: Option<DecType>,
    pub tensor: Option<SparseTensor>,
    pub lambdas: Vec<OnePS>,
    pub flags: Vec<WeightedFlag>,
    pub ambient: Option<AmbientSpace>,
    pub total: Option<SheafData>,
    pub filtrations: Vec<WeightedFiltration>,
    pub epsilon: Option<Poly>,
}

fn load(path: &Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("invalid JSON in {}: {e}", path.display())))?;
    parse_problem(&value)
}

fn obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::input(format!("{what} must be a JSON object")))
}

fn arr<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::input(format!("{what} must be a JSON array")))
}

fn uint(v: &Value, what: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::input(format!("{what} must be a nonnegative integer")))
}

fn int(v: &Value, what: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| Error::input(format!("{what} must be an integer")))
}

pub fn parse_problem(v: &Value) -> Result<Problem> {
    let root = obj(v, "problem file")?;
    match root.get("version").and_then(|x| x.as_str()) {
        Some(FORMAT_VERSION) => {}
        Some(other) => {
            return Err(Error::input(format!(
                "unsupported format version {other:?}; expected {FORMAT_VERSION:?}"
            )))
        }
        None => return Err(Error::input("missing \"version\" field")),
    }

    let dec_type = root.get("dec_type").map(parse_dec_type).transpose()?;
    let tensor = match root.get("tensor") {
        Some(t) => {
            let dt = dec_type
                .clone()
                .ok_or_else(|| Error::input("\"tensor\" requires \"dec_type\""))?;
            Some(parse_tensor(t, dt)?)
        }
        None => None,
    };
    let lambdas = match root.get("lambdas") {
        Some(l) => arr(l, "lambdas")?
            .iter()
            .map(parse_lambda)
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let flags = match root.get("flags") {
        Some(f) => arr(f, "flags")?
            .iter()
            .map(parse_flag)
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let ambient = root.get("ambient").map(parse_ambient).transpose()?;
    let total = root.get("total").map(parse_sheaf).transpose()?;
    let filtrations = match root.get("filtrations") {
        Some(f) => {
            let total = total
                .clone()
                .ok_or_else(|| Error::input("\"filtrations\" requires \"total\""))?;
            arr(f, "filtrations")?
                .iter()
                .map(|x| parse_filtration(x, &total))
                .collect::<Result<Vec<_>>>()?
        }
        None => Vec::new(),
    };
    let epsilon = root.get("epsilon").map(parse_poly).transpose()?;

    Ok(Problem {
        dec_type,
        tensor,
        lambdas,
        flags,
        ambient,
        total,
        filtrations,
        epsilon,
    })
}

fn parse_dec_type(v: &Value) -> Result<DecType> {
    let o = obj(v, "dec_type")?;
    let r = uint(o.get("r").ok_or_else(|| Error::input("dec_type needs \"r\""))?, "r")? as usize;
    let comps = arr(
        o.get("components")
            .ok_or_else(|| Error::input("dec_type needs \"components\""))?,
        "components",
    )?;
    let components = comps
        .iter()
        .map(|c| {
            let co = obj(c, "component")?;
            let get = |k: &str| -> Result<u32> {
                Ok(uint(co.get(k).ok_or_else(|| Error::input(format!("component needs \"{k}\"")))?, k)? as u32)
            };
            Ok(Component {
                a: get("a")?,
                b: get("b")?,
                c: get("c")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    // negative-degree components are legal in files (they arise from dual
    // expansions), so skip the positivity gate of DecType::new
    if r == 0 || components.is_empty() {
        return Err(Error::input("dec_type needs r >= 1 and at least one component"));
    }
    Ok(DecType::new_unchecked(r, components))
}

fn parse_tensor(v: &Value, dec_type: DecType) -> Result<SparseTensor> {
    let terms = arr(v, "tensor")?
        .iter()
        .map(|t| {
            let o = obj(t, "tensor term")?;
            let comp = uint(
                o.get("component")
                    .ok_or_else(|| Error::input("term needs \"component\""))?,
                "component",
            )? as usize;
            let copy = match o.get("copy") {
                Some(c) => uint(c, "copy")? as usize,
                None => 0,
            };
            let mi = arr(
                o.get("multiindex")
                    .ok_or_else(|| Error::input("term needs \"multiindex\""))?,
                "multiindex",
            )?
            .iter()
            .map(|x| Ok(uint(x, "multiindex entry")? as u8))
            .collect::<Result<Vec<u8>>>()?;
            let coeff = rat_from_json(
                o.get("coeff")
                    .ok_or_else(|| Error::input("term needs \"coeff\""))?,
            )?;
            Ok(((comp, copy, mi), coeff))
        })
        .collect::<Result<Vec<(TermKey, Rat)>>>()?;
    SparseTensor::new(dec_type, terms)
}

fn parse_lambda(v: &Value) -> Result<OnePS> {
    let weights = arr(v, "lambda")?
        .iter()
        .map(|x| int(x, "lambda weight"))
        .collect::<Result<Vec<i64>>>()?;
    if weights.is_empty() {
        return Err(Error::input("lambda must be nonempty"));
    }
    if weights.iter().sum::<i64>() == 0 {
        OnePS::sl(weights)
    } else {
        Ok(OnePS::gl(weights))
    }
}

fn parse_flag(v: &Value) -> Result<WeightedFlag> {
    let o = obj(v, "flag")?;
    let n = uint(o.get("n").ok_or_else(|| Error::input("flag needs \"n\""))?, "n")? as usize;
    let dims = arr(
        o.get("dims").ok_or_else(|| Error::input("flag needs \"dims\""))?,
        "dims",
    )?
    .iter()
    .map(|x| Ok(uint(x, "flag dim")? as usize))
    .collect::<Result<Vec<usize>>>()?;
    let alphas = arr(
        o.get("alphas")
            .ok_or_else(|| Error::input("flag needs \"alphas\""))?,
        "alphas",
    )?
    .iter()
    .map(rat_from_json)
    .collect::<Result<Vec<Rat>>>()?;
    WeightedFlag::new(n, dims, alphas)
}

fn parse_poly(v: &Value) -> Result<Poly> {
    Ok(Poly::new(
        arr(v, "polynomial")?
            .iter()
            .map(rat_from_json)
            .collect::<Result<Vec<Rat>>>()?,
    ))
}

fn parse_ambient(v: &Value) -> Result<AmbientSpace> {
    let o = obj(v, "ambient")?;
    let dim = uint(o.get("dim").ok_or_else(|| Error::input("ambient needs \"dim\""))?, "dim")? as usize;
    let p = parse_poly(
        o.get("structure_hilbert")
            .ok_or_else(|| Error::input("ambient needs \"structure_hilbert\""))?,
    )?;
    AmbientSpace::new(dim, p)
}

fn parse_sheaf(v: &Value) -> Result<SheafData> {
    let o = obj(v, "sheaf")?;
    let rank = uint(o.get("rank").ok_or_else(|| Error::input("sheaf needs \"rank\""))?, "rank")? as usize;
    let degree = rat_from_json(
        o.get("degree")
            .ok_or_else(|| Error::input("sheaf needs \"degree\""))?,
    )?;
    let hilbert = parse_poly(
        o.get("hilbert")
            .ok_or_else(|| Error::input("sheaf needs \"hilbert\""))?,
    )?;
    Ok(SheafData {
        rank,
        degree,
        hilbert,
    })
}

fn parse_filtration(v: &Value, total: &SheafData) -> Result<WeightedFiltration> {
    let o = obj(v, "filtration")?;
    let steps = arr(
        o.get("steps")
            .ok_or_else(|| Error::input("filtration needs \"steps\""))?,
        "steps",
    )?
    .iter()
    .map(parse_sheaf)
    .collect::<Result<Vec<_>>>()?;
    let alphas = arr(
        o.get("alphas")
            .ok_or_else(|| Error::input("filtration needs \"alphas\""))?,
        "alphas",
    )?
    .iter()
    .map(rat_from_json)
    .collect::<Result<Vec<Rat>>>()?;
    WeightedFiltration::new(steps, alphas, total.clone())
}

// output helpers

fn rat_val(x: &Rat) -> Value {
    Value::String(rat_to_string(x))
}

fn rats_val(xs: &[Rat]) -> Value {
    Value::Array(xs.iter().map(rat_val).collect())
}

fn lambda_val(l: &OnePS) -> Value {
    json!(l.weights)
}

fn flag_val(f: &WeightedFlag) -> Value {
    json!({
        "n": f.n,
        "dims": f.dims,
        "alphas": f.alphas.iter().map(rat_to_string).collect::<Vec<_>>(),
        "gamma_blocks": f.gamma_blocks().iter().map(rat_to_string).collect::<Vec<_>>(),
    })
}

fn tensor_val(w: &SparseTensor) -> Value {
    let terms: Vec<Value> = w
        .terms
        .iter()
        .map(|((comp, copy, mi), coeff)| {
            json!({
                "component": comp,
                "copy": copy,
                "multiindex": mi,
                "coeff": rat_to_string(coeff),
            })
        })
        .collect();
    Value::Array(terms)
}

fn dec_type_val(t: &DecType) -> Value {
    json!({
        "r": t.r,
        "components": t.components.iter().map(|c| json!({"a": c.a, "b": c.b, "c": c.c})).collect::<Vec<_>>(),
    })
}

fn char_blocks_val(blocks: &[(usize, i64)]) -> Value {
    Value::Array(
        blocks
            .iter()
            .map(|&(size, exp)| json!({"size": size, "exponent": exp}))
            .collect(),
    )
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::TorusSemistable => "torus-semistable",
        Verdict::Unstable => "unstable",
    }
}

fn sheaf_verdict_str(v: SheafVerdict) -> &'static str {
    match v {
        SheafVerdict::Stable => "stable",
        SheafVerdict::SemistableOnly => "semistable-only",
        SheafVerdict::Unstable => "unstable",
    }
}

fn report_val(r: &CheckReport) -> Value {
    json!({
        "verdict": sheaf_verdict_str(r.verdict),
        "witness": r.witness,
        "considered": r.considered,
        "epsilon_degree_exact": r.epsilon_degree_exact,
    })
}

fn need_tensor(p: &Problem) -> Result<&SparseTensor> {
    p.tensor
        .as_ref()
        .ok_or_else(|| Error::input("this command requires a \"tensor\" section"))
}

// commands

fn cmd_mu(p: &Problem) -> Result<Value> {
    let w = need_tensor(p)?;
    if p.lambdas.is_empty() {
        return Err(Error::input("mu requires a nonempty \"lambdas\" section"));
    }
    let results = p
        .lambdas
        .iter()
        .map(|l| Ok(json!({"lambda": lambda_val(l), "mu": mu(l, w)?})))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({"command": "mu", "results": results}))
}

fn cmd_flag(p: &Problem) -> Result<Value> {
    if p.lambdas.is_empty() {
        return Err(Error::input("flag requires a nonempty \"lambdas\" section"));
    }
    let results: Vec<Value> = p
        .lambdas
        .iter()
        .map(|l| {
            let (flag, perm) = weighted_flag_of(l);
            json!({
                "lambda": lambda_val(l),
                "flag": flag_val(&flag),
                "sorting_permutation": perm,
            })
        })
        .collect();
    Ok(json!({"command": "flag", "results": results}))
}

fn instability_val(r: &InstabilityResult) -> Value {
    let mut m = Map::new();
    m.insert("verdict".into(), json!(verdict_str(r.verdict)));
    if let Some(l) = &r.lambda_star {
        m.insert("lambda_star".into(), lambda_val(l));
    }
    if let Some(q) = r.q {
        m.insert("q".into(), json!(q));
    }
    if let Some(msq) = &r.m0_sq {
        m.insert("m0_sq".into(), rat_val(msq));
    }
    if let Some(f) = &r.flag {
        m.insert("flag".into(), flag_val(f));
    }
    if let Some(c) = &r.char_exponents {
        m.insert("instability_character".into(), char_blocks_val(c));
    }
    Value::Object(m)
}

fn cmd_kempf(p: &Problem, restarts: usize, seed: u64, brute_box: Option<i64>) -> Result<Value> {
    let w = need_tensor(p)?;
    let mut m = Map::new();
    m.insert("command".into(), json!("kempf"));
    if restarts == 0 {
        let res = torus_instability(w)?;
        m.insert("result".into(), instability_val(&res));
        m.insert("heuristic".into(), json!(false));
        m.insert("polystable_within_torus".into(), json!(torus_polystable(w)?));
        cross_check_brute(&mut m, w, &res, brute_box)?;
    } else {
        let search = kempf_search(w, restarts, seed)?;
        m.insert("result".into(), instability_val(&search.result));
        m.insert("heuristic".into(), json!(search.heuristic));
        m.insert("restart_index".into(), json!(search.restart_index));
        m.insert(
            "frame".into(),
            match &search.frame {
                None => Value::Null,
                Some(g) => Value::Array(g.iter().map(|row| rats_val(row)).collect()),
            },
        );
        let base = torus_instability(w)?;
        cross_check_brute(&mut m, w, &base, brute_box)?;
    }
    Ok(Value::Object(m))
}

fn cross_check_brute(
    m: &mut Map<String, Value>,
    w: &SparseTensor,
    within_torus: &InstabilityResult,
    brute_box: Option<i64>,
) -> Result<()> {
    let Some(bound) = brute_box else {
        return Ok(());
    };
    let brute = brute_force_instability(w, bound)?;
    let agree = match (&brute, within_torus.verdict) {
        (None, Verdict::TorusSemistable) => true,
        (None, Verdict::Unstable) => false,
        (Some(_), Verdict::TorusSemistable) => false,
        (Some(b), Verdict::Unstable) => {
            let l = within_torus.lambda_star.as_ref().expect("unstable result");
            let n = crate::lattice::norm_sq(l);
            let q = within_torus.q.expect("unstable result");
            b.lambda.weights == l.weights && b.q * b.q * n == q * q * b.norm_sq
        }
    };
    m.insert(
        "brute_force".into(),
        match &brute {
            None => json!({"found": false}),
            Some(b) => json!({
                "found": true,
                "lambda": lambda_val(&b.lambda),
                "q": b.q,
                "norm_sq": b.norm_sq,
                "optima": b.optima.iter().map(lambda_val).collect::<Vec<_>>(),
            }),
        },
    );
    if !agree {
        return Err(Error::certificate(
            "within-torus result disagrees with the exhaustive box search",
        ));
    }
    m.insert("brute_force_agrees".into(), json!(true));
    Ok(())
}

fn cmd_char(p: &Problem) -> Result<Value> {
    if p.lambdas.is_empty() {
        return Err(Error::input("char requires a nonempty \"lambdas\" section"));
    }
    let results = p
        .lambdas
        .iter()
        .map(|l| {
            let blocks = instability_character(l);
            let mut m = Map::new();
            m.insert("lambda".into(), lambda_val(l));
            m.insert("character".into(), char_blocks_val(&blocks));
            m.insert(
                "self_pairing".into(),
                json!(crate::kempf::character_pairing(l, &blocks)),
            );
            if let Some(w) = &p.tensor {
                let q = mu(l, w)?;
                m.insert("mu".into(), json!(q));
                if q < 0 {
                    let (_, scaled) = chi_star(l, w)?;
                    m.insert("chi_star".into(), char_blocks_val(&scaled));
                }
            }
            Ok(Value::Object(m))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({"command": "char", "results": results}))
}

/// Builds the decorated object from a problem file; candidate fibre flags
/// are derived from the filtration ranks by duality, so files carry only
/// the sheaf-side data.
fn build_object(p: &Problem) -> Result<DecoratedObject> {
    let ambient = p
        .ambient
        .clone()
        .ok_or_else(|| Error::input("check requires an \"ambient\" section"))?;
    let total = p
        .total
        .clone()
        .ok_or_else(|| Error::input("check requires a \"total\" section"))?;
    let tensor = need_tensor(p)?.clone();
    if p.filtrations.is_empty() {
        return Err(Error::input("check requires a nonempty \"filtrations\" section"));
    }
    let candidates = p
        .filtrations
        .iter()
        .map(|f| {
            let ranks: Vec<usize> = f.steps.iter().map(|s| s.rank).collect();
            let (dims, alphas) = dual_flag(&ranks, &f.alphas, total.rank)?;
            Ok((f.clone(), WeightedFlag::new(total.rank, dims, alphas)?))
        })
        .collect::<Result<Vec<_>>>()?;
    DecoratedObject::new(ambient, total, tensor, candidates)
}

fn cmd_check(p: &Problem, mode: CheckMode) -> Result<Value> {
    let obj = build_object(p)?;
    let per_candidate: Vec<Value> = obj
        .candidates
        .iter()
        .map(|(f, flag)| {
            let mu_val = mu_filtration_tensor(flag, &obj.tensor)?;
            Ok(json!({
                "ranks": f.steps.iter().map(|s| s.rank).collect::<Vec<_>>(),
                "alphas": f.alphas.iter().map(rat_to_string).collect::<Vec<_>>(),
                "m_poly": m_poly(f).coeffs.iter().map(rat_to_string).collect::<Vec<_>>(),
                "l_slope": rat_to_string(&l_slope(f)),
                "mu_filtration": rat_to_string(&mu_val),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut m = Map::new();
    m.insert("command".into(), json!("check"));
    m.insert("candidates".into(), Value::Array(per_candidate));
    m.insert(
        "note".into(),
        json!("verdicts are relative to the supplied candidate filtrations"),
    );
    match mode {
        CheckMode::Decorated => {
            let eps = p
                .epsilon
                .as_ref()
                .ok_or_else(|| Error::input("--mode decorated requires an \"epsilon\" section"))?;
            m.insert("mode".into(), json!("decorated"));
            m.insert("report".into(), report_val(&check_decorated(&obj, eps)?));
        }
        CheckMode::Honest => {
            m.insert("mode".into(), json!("honest"));
            m.insert("report".into(), report_val(&check_honest(&obj)?));
        }
        CheckMode::Slope => {
            m.insert("mode".into(), json!("slope"));
            m.insert("report".into(), report_val(&check_slope(&obj)?));
        }
        CheckMode::Chain => {
            let rep = implication_report(&obj)?;
            m.insert("mode".into(), json!("chain"));
            m.insert(
                "report".into(),
                json!({
                    "slope_stable": rep.slope_stable,
                    "stable": rep.stable,
                    "semistable": rep.semistable,
                    "slope_semistable": rep.slope_semistable,
                    "coefficient_identity": rep.coeff_checks.iter().map(|&(i, ok)| json!({"candidate": i, "ok": ok})).collect::<Vec<_>>(),
                }),
            );
        }
    }
    Ok(Value::Object(m))
}

fn cmd_homogenize(p: &Problem, multiplier: i64) -> Result<Value> {
    let w = need_tensor(p)?;
    let plan = choose_omega(&w.dec_type, multiplier)?;
    let (a, b, c) = plan.target_type;
    let mut m = Map::new();
    m.insert("command".into(), json!("homogenize"));
    m.insert(
        "plan".into(),
        json!({
            "v_values": plan.v_values,
            "omega": plan.omega,
            "tuples": plan.tuples,
            "target_type": {"a": a, "b": b, "c": c},
        }),
    );
    let flags: Vec<Value> = p
        .flags
        .iter()
        .map(|flag| {
            let nu = nu_filtration(flag, w, &plan)?;
            let (sm, sn, agree) = sign_equiv_check(flag, w, &plan)?;
            if !agree {
                return Err(Error::certificate(
                    "sign of nu disagrees with the direct filtration value",
                ));
            }
            Ok(json!({
                "flag": flag_val(flag),
                "nu": rat_to_string(&nu),
                "sign_mu": sm,
                "sign_nu": sn,
                "agree": agree,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    m.insert("flags".into(), Value::Array(flags));
    if w.r() >= 2 {
        let (max_mu, bound, ok) = saturation_bound_check(w, &plan)?;
        if !ok {
            return Err(Error::certificate(
                "one-step filtration value exceeds the saturation bound",
            ));
        }
        m.insert(
            "saturation".into(),
            json!({
                "max_mu": rat_to_string(&max_mu),
                "bound": rat_to_string(&bound),
                "ok": ok,
            }),
        );
    }
    Ok(Value::Object(m))
}

fn cmd_oracle(p: &Problem, brute_box: Option<i64>) -> Result<Value> {
    let w = need_tensor(p)?;
    let orbits = p
        .lambdas
        .iter()
        .map(|l| {
            let orbit = laurent_orbit(l, w)?;
            let pieces: Vec<Value> = orbit
                .pieces
                .iter()
                .map(|(e, piece)| json!({"exponent": e, "terms": tensor_val(piece)}))
                .collect();
            Ok(json!({
                "lambda": lambda_val(l),
                "pieces": pieces,
                "top_exponent": orbit.top_exponent(),
                "limit_exists": orbit.limit_exists(),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut m = Map::new();
    m.insert("command".into(), json!("oracle"));
    m.insert("orbits".into(), Value::Array(orbits));
    if let Some(bound) = brute_box {
        m.insert(
            "brute_force".into(),
            match brute_force_instability(w, bound)? {
                None => json!({"found": false}),
                Some(b) => json!({
                    "found": true,
                    "lambda": lambda_val(&b.lambda),
                    "q": b.q,
                    "norm_sq": b.norm_sq,
                    "optima": b.optima.iter().map(lambda_val).collect::<Vec<_>>(),
                }),
            },
        );
    }
    Ok(Value::Object(m))
}

/// Problem-file documents for the bundled examples; also used by tests.
pub fn example_documents() -> Vec<(&'static str, Value)> {
    let sheaf_sections = json!({
        "ambient": {"dim": 2, "structure_hilbert": ["1", "1", "1/2"]},
        "total": {"rank": 2, "degree": "0", "hilbert": ["2", "2", "1"]},
        "filtrations": [
            {"steps": [{"rank": 1, "degree": "0", "hilbert": ["1", "1", "1/2"]}], "alphas": ["1"]}
        ],
        "epsilon": ["0", "1"],
    });

    let mut out = Vec::new();
    for (name, r, basis) in [
        ("so2_hyperbolic", 2, OrthBasis::Hyperbolic),
        ("so2_standard", 2, OrthBasis::Standard),
        ("so3_hyperbolic", 3, OrthBasis::Hyperbolic),
    ] {
        let (dec, w) = orthogonal_example(r, basis).expect("fixed valid rank");
        let lambdas: Value = if r == 2 {
            json!([[1, -1]])
        } else {
            json!([[1, 0, -1]])
        };
        let mut doc = Map::new();
        doc.insert("version".into(), json!(FORMAT_VERSION));
        doc.insert("dec_type".into(), dec_type_val(&dec));
        doc.insert("tensor".into(), tensor_val(&w));
        doc.insert("lambdas".into(), lambdas);
        if name == "so2_hyperbolic" {
            for (k, v) in sheaf_sections.as_object().expect("object") {
                doc.insert(k.clone(), v.clone());
            }
        }
        out.push((name, Value::Object(doc)));
    }

    let (dec, w) = adjoint_example();
    out.push((
        "adjoint",
        json!({
            "version": FORMAT_VERSION,
            "dec_type": dec_type_val(&dec),
            "tensor": tensor_val(&w),
            "lambdas": [[1, 0, -1]],
        }),
    ));

    // plain quadric b1 b2 + b2 b1, positive degree, so it homogenizes
    let dec = DecType::new_unchecked(2, vec![Component { a: 2, b: 1, c: 0 }]);
    let w = SparseTensor::new(
        dec.clone(),
        vec![((0, 0, vec![1, 2]), rat(1)), ((0, 0, vec![2, 1]), rat(1))],
    )
    .expect("fixed valid tensor");
    out.push((
        "quadric",
        json!({
            "version": FORMAT_VERSION,
            "dec_type": dec_type_val(&dec),
            "tensor": tensor_val(&w),
            "lambdas": [[1, -1]],
            "flags": [{"n": 2, "dims": [1], "alphas": ["1"]}],
        }),
    ));
    out
}

/// In-process dispatch on an already-parsed document, for bindings and
/// tests. `command` is one of `mu`, `flag`, `kempf`, `char`,
/// `check:decorated`, `check:honest`, `check:slope`, `check:chain`,
/// `homogenize`, `oracle`.
pub fn run_on_document(command: &str, doc: &Value) -> Result<Value> {
    let p = parse_problem(doc)?;
    match command {
        "mu" => cmd_mu(&p),
        "flag" => cmd_flag(&p),
        "kempf" => cmd_kempf(&p, 0, 0, None),
        "char" => cmd_char(&p),
        "check:decorated" => cmd_check(&p, CheckMode::Decorated),
        "check:honest" => cmd_check(&p, CheckMode::Honest),
        "check:slope" => cmd_check(&p, CheckMode::Slope),
        "check:chain" => cmd_check(&p, CheckMode::Chain),
        "homogenize" => cmd_homogenize(&p, 1),
        "oracle" => cmd_oracle(&p, None),
        other => Err(Error::input(format!("unknown command {other:?}"))),
    }
}

fn cmd_examples(out_dir: &Path) -> Result<Value> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::input(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut written = Vec::new();
    for (name, doc) in example_documents() {
        let path = out_dir.join(format!("{name}.json"));
        std::fs::write(&path, to_canonical_string(&doc) + "\n")
            .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))?;
        written.push(json!(path.display().to_string()));
    }
    Ok(json!({"command": "examples", "written": written}))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(v: Value) -> Problem {
        parse_problem(&v).unwrap()
    }

    fn b1b1_doc() -> Value {
        json!({
            "version": FORMAT_VERSION,
            "dec_type": {"r": 2, "components": [{"a": 2, "b": 1, "c": 0}]},
            "tensor": [{"component": 0, "multiindex": [1, 1], "coeff": 1}],
            "lambdas": [[1, -1], [0, 0]],
        })
    }

    #[test]
    fn version_gate() {
        assert!(parse_problem(&json!({"version": "gitstab/0"})).is_err());
        assert!(parse_problem(&json!({})).is_err());
        assert!(parse_problem(&json!({"version": FORMAT_VERSION})).is_ok());
    }

    #[test]
    fn mu_command() {
        let doc = cmd_mu(&problem(b1b1_doc())).unwrap();
        let results = doc["results"].as_array().unwrap();
        assert_eq!(results[0]["mu"], json!(2));
        assert_eq!(results[1]["mu"], json!(0));
    }

    #[test]
    fn kempf_command() {
        let doc = cmd_kempf(&problem(b1b1_doc()), 0, 0, Some(3)).unwrap();
        assert_eq!(doc["result"]["verdict"], json!("unstable"));
        assert_eq!(doc["result"]["lambda_star"], json!([-1, 1]));
        assert_eq!(doc["result"]["q"], json!(-2));
        assert_eq!(doc["result"]["m0_sq"], json!("2"));
        assert_eq!(doc["brute_force_agrees"], json!(true));
    }

    #[test]
    fn check_chain_on_example() {
        let (name, doc) = example_documents().remove(0);
        assert_eq!(name, "so2_hyperbolic");
        let p = problem(doc);
        let out = cmd_check(&p, CheckMode::Chain).unwrap();
        let rep = &out["report"];
        assert_eq!(rep["slope_stable"], json!(false));
        assert_eq!(rep["stable"], json!(false));
        assert_eq!(rep["semistable"], json!(true));
        assert_eq!(rep["slope_semistable"], json!(true));

        let out = cmd_check(&p, CheckMode::Decorated).unwrap();
        assert_eq!(out["report"]["verdict"], json!("semistable-only"));
    }

    #[test]
    fn deterministic_output() {
        let p1 = cmd_kempf(&problem(b1b1_doc()), 3, 9, None).unwrap();
        let p2 = cmd_kempf(&problem(b1b1_doc()), 3, 9, None).unwrap();
        assert_eq!(to_canonical_string(&p1), to_canonical_string(&p2));
    }

    #[test]
    fn homogenize_command() {
        let doc = json!({
            "version": FORMAT_VERSION,
            "dec_type": {"r": 2, "components": [{"a": 1, "b": 1, "c": 0}, {"a": 2, "b": 1, "c": 0}]},
            "tensor": [
                {"component": 0, "multiindex": [1], "coeff": "1"},
                {"component": 1, "multiindex": [2, 2], "coeff": "1"}
            ],
            "flags": [{"n": 2, "dims": [1], "alphas": ["1"]}],
        });
        let out = cmd_homogenize(&problem(doc), 1).unwrap();
        assert_eq!(out["plan"]["omega"], json!(2));
        assert_eq!(out["flags"][0]["nu"], json!("1"));
        assert_eq!(out["flags"][0]["agree"], json!(true));
        assert_eq!(out["saturation"]["ok"], json!(true));
    }

    #[test]
    fn exit_codes() {
        let dir = std::env::temp_dir().join("gitstab-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let bad = dir.join("bad.json");
        std::fs::write(&bad, "{ not json").unwrap();
        let code = main_from_args(
            ["gitstab", "mu", bad.to_str().unwrap()]
                .iter()
                .map(|s| s.to_string()),
        );
        assert_eq!(code, 2);
    }
}
