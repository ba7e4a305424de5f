//! Command dispatch: each command turns a problem file into a JSON report.

use std::collections::BTreeMap;

use num_traits::Zero;
use poisson_core::cech_hyper::{
    global_sections, hirzebruch, hp_cech, ks_class, pn, pn_names, Atlas, CechError, Chart, GlueStatus, HyperCochain,
};
use poisson_core::dgla::{hodge, FDGLA};
use poisson_core::exact_algebra::scalar::fmt_scalar;
use poisson_core::exact_algebra::{MultiPoly, Scalar, Vars};
use poisson_core::jacobi::{base_ring, build_jacobi, jacobi_h0, morphic_assemble, morphic_to_hom, total_degree, Chain};
use poisson_core::lp_affine::LpComplex;
use poisson_core::mc_solver::{
    harmonic_basis, is_unobstructed, kuranishi_solve, mc_residual, obstruction, GSeries,
};
use poisson_core::multivector::{bivector_from_terms, jacobi_defect, ChartMap, PolyVector};
use poisson_core::poisson_scheme::{
    first_order_deformations, is_first_order_poisson, is_poisson_ideal, poisson_derivations, pt1_surjection,
    substitution_relates, validate_module, verify_hom, DegreeReport, PoissonPresentation, QuotientModule,
};
use poisson_core::random;
use serde_json::{json, Value};

use crate::problem::{AtlasKind, ModuleKind, ProblemFile};
use crate::CliError;

/// Command-line overrides; `None` falls back to the problem file, then to defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub window: Option<i32>,
    pub max_window: Option<i32>,
    pub degree: Option<i32>,
    pub order: Option<u32>,
    pub ordered_pairs: bool,
    pub seed: Option<u64>,
}

pub const DEFAULT_WINDOW: i32 = 1;
pub const DEFAULT_MAX_WINDOW: i32 = 8;
pub const DEFAULT_DEGREE: i32 = 3;
pub const DEFAULT_ORDER: u32 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    CheckPoisson,
    HpAffine { index: usize, degree: Option<i32> },
    HpCech { index: usize, window: Option<i32> },
    Sections { degree: usize, window: Option<i32> },
    GlueCheck,
    KsClass,
    McSolve { order: Option<u32> },
    Jacobi { n: Option<u32> },
    BaseRing { n: Option<u32> },
    Morphic,
    Pt0 { degree: Option<i32> },
    Pt1 { degree: Option<i32> },
    Fod { degree: Option<i32> },
}

pub const COMMANDS: [&str; 13] = [
    "check-poisson",
    "hp-affine",
    "hp-cech",
    "sections",
    "glue-check",
    "ks-class",
    "mc-solve",
    "jacobi",
    "base-ring",
    "morphic",
    "pt0",
    "pt1",
    "fod",
];

fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, CliError> {
    s.parse().map_err(|_| CliError::Usage(format!("{what}: `{s}` is not a valid integer")))
}

impl Command {
    /// `name` plus its numeric arguments (required first, then optional).
    pub fn from_args(name: &str, args: &[String]) -> Result<Command, CliError> {
        let arity = |lo: usize, hi: usize| -> Result<(), CliError> {
            if args.len() < lo || args.len() > hi {
                Err(CliError::Usage(format!("`{name}` takes {lo}..={hi} numeric arguments, got {}", args.len())))
            } else {
                Ok(())
            }
        };
        let opt_i32 = |k: usize, what: &str| -> Result<Option<i32>, CliError> { args.get(k).map(|s| num(s, what)).transpose() };
        let opt_u32 = |k: usize, what: &str| -> Result<Option<u32>, CliError> { args.get(k).map(|s| num(s, what)).transpose() };
        Ok(match name {
            "check-poisson" => {
                arity(0, 0)?;
                Command::CheckPoisson
            }
            "hp-affine" => {
                arity(1, 2)?;
                Command::HpAffine { index: num(&args[0], "index")?, degree: opt_i32(1, "degree")? }
            }
            "hp-cech" => {
                arity(1, 2)?;
                Command::HpCech { index: num(&args[0], "index")?, window: opt_i32(1, "window")? }
            }
            "sections" => {
                arity(1, 2)?;
                Command::Sections { degree: num(&args[0], "degree")?, window: opt_i32(1, "window")? }
            }
            "glue-check" => {
                arity(0, 0)?;
                Command::GlueCheck
            }
            "ks-class" => {
                arity(0, 0)?;
                Command::KsClass
            }
            "mc-solve" => {
                arity(0, 1)?;
                Command::McSolve { order: opt_u32(0, "order")? }
            }
            "jacobi" => {
                arity(0, 1)?;
                Command::Jacobi { n: opt_u32(0, "n")? }
            }
            "base-ring" => {
                arity(0, 1)?;
                Command::BaseRing { n: opt_u32(0, "n")? }
            }
            "morphic" => {
                arity(0, 0)?;
                Command::Morphic
            }
            "pt0" => {
                arity(0, 1)?;
                Command::Pt0 { degree: opt_i32(0, "degree")? }
            }
            "pt1" => {
                arity(0, 1)?;
                Command::Pt1 { degree: opt_i32(0, "degree")? }
            }
            "fod" => {
                arity(0, 1)?;
                Command::Fod { degree: opt_i32(0, "degree")? }
            }
            _ => return Err(CliError::Usage(format!("unknown command `{name}` (expected one of {})", COMMANDS.join(", ")))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckPoisson => "check-poisson",
            Command::HpAffine { .. } => "hp-affine",
            Command::HpCech { .. } => "hp-cech",
            Command::Sections { .. } => "sections",
            Command::GlueCheck => "glue-check",
            Command::KsClass => "ks-class",
            Command::McSolve { .. } => "mc-solve",
            Command::Jacobi { .. } => "jacobi",
            Command::BaseRing { .. } => "base-ring",
            Command::Morphic => "morphic",
            Command::Pt0 { .. } => "pt0",
            Command::Pt1 { .. } => "pt1",
            Command::Fod { .. } => "fod",
        }
    }
}

/// Effective settings after flags and file options.
#[derive(Clone, Debug)]
struct Settings {
    window: i32,
    max_window: i32,
    degree: i32,
    order: u32,
    ordered_pairs: bool,
    seed: u64,
}

impl Settings {
    fn resolve(pf: &ProblemFile, f: &Flags) -> Settings {
        let o = &pf.options;
        Settings {
            window: f.window.or(o.window).unwrap_or(DEFAULT_WINDOW),
            max_window: f.max_window.or(o.max_window).unwrap_or(DEFAULT_MAX_WINDOW),
            degree: f.degree.or(o.degree).unwrap_or(DEFAULT_DEGREE),
            order: f.order.or(o.order).unwrap_or(DEFAULT_ORDER),
            ordered_pairs: f.ordered_pairs || o.ordered_pairs.unwrap_or(false),
            seed: f.seed.or(o.seed).unwrap_or(0),
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "window": self.window,
            "max_window": self.max_window,
            "degree": self.degree,
            "order": self.order,
            "ordered_pairs": self.ordered_pairs,
            "seed": self.seed,
        })
    }
}

/// A finished run: the JSON document, a one-line summary and the exit code.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub summary: String,
    pub exit_code: i32,
}

impl Outcome {
    pub fn checks(&self) -> Vec<(String, bool)> {
        self.report["checks"]
            .as_array()
            .map(|a| a.iter().map(|c| (c["name"].as_str().unwrap_or("").to_string(), c["pass"] == true)).collect())
            .unwrap_or_default()
    }
}

struct Body {
    arguments: Value,
    result: Value,
    checks: Vec<(String, bool)>,
    stabilized: Option<bool>,
    summary: String,
}

fn s(c: &Scalar) -> Value {
    Value::String(fmt_scalar(c))
}

fn svec(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(s).collect())
}

fn input(message: impl Into<String>) -> CliError {
    CliError::Input { message: message.into(), object: None }
}

fn input_obj(message: impl Into<String>, object: impl Into<String>) -> CliError {
    CliError::Input { message: message.into(), object: Some(object.into()) }
}

fn cech_err(e: CechError) -> CliError {
    match e {
        CechError::NotPoisson => input("the bivector is not Poisson on every chart"),
        CechError::NotGlued(p) => input_obj("bivectors do not glue", p),
        CechError::NotGlobal(p) => input_obj("not a global field", p),
        other => input(other.to_string()),
    }
}

pub fn run(cmd: &Command, pf: &ProblemFile, flags: &Flags) -> Result<Outcome, CliError> {
    let st = Settings::resolve(pf, flags);
    let body = match cmd {
        Command::CheckPoisson => check_poisson(pf, &st)?,
        Command::HpAffine { index, degree } => hp_affine_cmd(pf, &st, *index, degree.unwrap_or(st.degree))?,
        Command::HpCech { index, window } => hp_cech_cmd(pf, &st, *index, window.unwrap_or(st.window))?,
        Command::Sections { degree, window } => sections_cmd(pf, &st, *degree, window.unwrap_or(st.window))?,
        Command::GlueCheck => glue_cmd(pf, &st, flags.window)?,
        Command::KsClass => ks_cmd(pf, &st)?,
        Command::McSolve { order } => mc_cmd(pf, order.unwrap_or(st.order))?,
        Command::Jacobi { n } => jacobi_cmd(pf, n.unwrap_or(st.order))?,
        Command::BaseRing { n } => base_ring_cmd(pf, n.unwrap_or(st.order))?,
        Command::Morphic => morphic_cmd(pf, st.order)?,
        Command::Pt0 { degree } => pt0_cmd(pf, &st, degree.unwrap_or(st.degree))?,
        Command::Pt1 { degree } => pt1_cmd(pf, &st, degree.unwrap_or(st.degree))?,
        Command::Fod { degree } => fod_cmd(pf, &st, degree.unwrap_or(st.degree))?,
    };
    let failed = body.checks.iter().filter(|c| !c.1).count();
    let (status, exit_code) = if failed > 0 {
        ("invariant_failure", 2)
    } else if body.stabilized == Some(false) {
        ("not_stabilized", 3)
    } else {
        ("ok", 0)
    };
    let checks: Vec<Value> = body.checks.iter().map(|(n, p)| json!({"name": n, "pass": p})).collect();
    let report = json!({
        "command": cmd.name(),
        "arguments": body.arguments,
        "settings": st.to_json(),
        "problem": pf.to_text(),
        "result": body.result,
        "checks": checks,
        "stabilized": body.stabilized,
        "status": status,
        "exit_code": exit_code,
    });
    let mut summary = format!("{}: {}", cmd.name(), body.summary);
    if failed > 0 {
        summary.push_str(&format!(" [{failed} check(s) FAILED]"));
    } else if !body.checks.is_empty() {
        summary.push_str(&format!(" [{} checks passed]", body.checks.len()));
    }
    if exit_code == 3 {
        summary.push_str(" [not stabilized]");
    }
    Ok(Outcome { report, summary, exit_code })
}

// ---------------------------------------------------------------- builders

fn affine_lambda(pf: &ProblemFile, st: &Settings) -> Result<PolyVector, CliError> {
    if pf.coords.is_empty() {
        return Err(input("no coordinates declared in [vars]"));
    }
    if !pf.params.is_empty() {
        return Err(input("affine commands do not take parameters; remove `params`"));
    }
    let vars = Vars::new(pf.coords.iter().cloned());
    bivector_from_terms(&vars, vars.len(), &pf.bivector, st.ordered_pairs).map_err(|e| input(e.to_string()))
}

fn require_poisson(l: &PolyVector) -> Result<(), CliError> {
    let d = jacobi_defect(l).map_err(|e| input(e.to_string()))?;
    if d.is_zero() {
        Ok(())
    } else {
        Err(input_obj("the bivector is not Poisson: [Λ,Λ] ≠ 0", d.to_string()))
    }
}

pub fn build_atlas(pf: &ProblemFile, ordered_pairs: bool) -> Result<Atlas, CliError> {
    let spec = pf.atlas.as_ref().ok_or_else(|| input("this command needs an [atlas] section"))?;
    let order = spec.order.unwrap_or(if pf.params.is_empty() { 0 } else { 1 });
    match &spec.kind {
        AtlasKind::Pn(n) => {
            let names = if pf.coords.is_empty() { pn_names(*n) } else { pf.coords.clone() };
            if names.len() != *n {
                return Err(input(format!("ℙ^{n} needs {n} chart coordinates, [vars] declares {}", names.len())));
            }
            let vars = Vars::new(names.iter().chain(pf.params.iter()).cloned());
            let lam = bivector_from_terms(&vars, *n, &pf.bivector, ordered_pairs).map_err(|e| input(e.to_string()))?;
            pn(*n, &names, Some(&lam), order).map_err(cech_err)
        }
        AtlasKind::Hirzebruch { m, k, g } => {
            if !pf.bivector.is_empty() {
                return Err(input("the hirzebruch builtin carries its own bivector; remove [bivector]"));
            }
            hirzebruch(*m, *k, g, order).map_err(cech_err)
        }
        AtlasKind::Explicit { charts, maps, lambdas } => {
            let idx: BTreeMap<&str, usize> = charts.iter().enumerate().map(|(i, c)| (c.name.as_str(), i)).collect();
            let ring = |c: usize| Vars::new(charts[c].coords.iter().chain(pf.params.iter()).cloned());
            let mut out = BTreeMap::new();
            for m in maps {
                let (j, k) = (idx[m.target.as_str()], idx[m.source.as_str()]);
                let comps = m.components.iter().map(|(_, n, d)| (n.clone(), d.clone())).collect();
                let cm = ChartMap::new(&ring(k), &ring(j), pf.params.len(), order, comps)
                    .map_err(|e| input(format!("map {} <- {}: {e}", m.target, m.source)))?;
                out.insert((j, k), cm);
            }
            let bivectors = if lambdas.is_empty() {
                None
            } else {
                let mut b = Vec::new();
                for (c, ch) in charts.iter().enumerate() {
                    let terms: Vec<_> = lambdas.iter().filter(|(n, _)| *n == ch.name).map(|(_, t)| t.clone()).collect();
                    b.push(
                        bivector_from_terms(&ring(c), ch.coords.len(), &terms, ordered_pairs)
                            .map_err(|e| input(format!("lambda on {}: {e}", ch.name)))?,
                    );
                }
                Some(b)
            };
            let cs = charts.iter().map(|c| Chart { name: c.name.clone(), coords: c.coords.clone() }).collect();
            Atlas::new(cs, pf.params.clone(), order, out, bivectors).map_err(cech_err)
        }
    }
}

fn unparametrized(a: Atlas) -> Result<Atlas, CliError> {
    if a.params().is_empty() {
        Ok(a)
    } else {
        a.at_zero().map_err(cech_err)
    }
}

fn cochain_json(a: &Atlas, c: &HyperCochain) -> Value {
    Value::Array(
        c.parts
            .iter()
            .map(|((b, j), p)| {
                let names: Vec<&str> = j.iter().map(|k| a.charts()[*k].name.as_str()).collect();
                json!({"multivector_degree": b, "charts": names, "field": p.to_string()})
            })
            .collect(),
    )
}

fn history_json(h: &[(i32, usize)]) -> Value {
    Value::Array(h.iter().map(|(w, d)| json!({"window": w, "dim": d})).collect())
}

fn degree_report_json(r: &DegreeReport) -> Value {
    json!({
        "graded": r.graded,
        "dims": r.dims(),
        "blocks": r.blocks.iter().map(|b| json!({
            "degree": b.degree,
            "dim": b.dim,
            "representatives": b.representatives.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn gseries_json(g: &GSeries) -> Value {
    Value::Array(g.terms.iter().map(|(e, v)| json!({"t": e, "value": svec(v)})).collect())
}

fn mono_name(m: &[(usize, usize)]) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter().map(|(a, i)| format!("e{a}_{i}")).collect::<Vec<_>>().join("*")
}

fn chain_json(c: &Chain) -> Value {
    Value::Object(c.iter().map(|(m, x)| (mono_name(m), s(x))).collect())
}

// ---------------------------------------------------------------- commands

/// `Σ_cyc {x_i,{x_j,x_k}}` over coordinate triples; independent of the
/// Schouten computation.
fn coordinate_jacobi_holds(l: &PolyVector) -> Result<bool, CliError> {
    let v = l.vars();
    let n = l.dim();
    let x = |i: usize| MultiPoly::var(v, i);
    let br = |f: &MultiPoly, g: &MultiPoly| l.bracket_functions(f, g).map_err(|e| input(e.to_string()));
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = br(&x(i), &br(&x(j), &x(k))?)?;
                let b = br(&x(j), &br(&x(k), &x(i))?)?;
                let c = br(&x(k), &br(&x(i), &x(j))?)?;
                if !(&(&a + &b) + &c).is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn check_poisson(pf: &ProblemFile, st: &Settings) -> Result<Body, CliError> {
    let mut per = Vec::new();
    let mut checks = Vec::new();
    let lambdas: Vec<(String, PolyVector)> = if pf.atlas.is_some() {
        let a = build_atlas(pf, st.ordered_pairs)?;
        a.charts().iter().zip(a.bivectors()).map(|(c, l)| (c.name.clone(), l.clone())).collect()
    } else {
        if pf.coords.is_empty() {
            return Err(input("no coordinates declared in [vars]"));
        }
        let vars = Vars::new(pf.coords.iter().chain(pf.params.iter()).cloned());
        let l = bivector_from_terms(&vars, pf.coords.len(), &pf.bivector, st.ordered_pairs).map_err(|e| input(e.to_string()))?;
        vec![("affine".to_string(), l)]
    };
    let mut all = true;
    for (name, l) in &lambdas {
        let d = jacobi_defect(l).map_err(|e| input(e.to_string()))?;
        let cj = coordinate_jacobi_holds(l)?;
        checks.push((format!("{name}: defect agrees with the coordinate Jacobi identity"), d.is_zero() == cj));
        all &= d.is_zero();
        per.push(json!({"chart": name, "bivector": l.to_string(), "defect": d.to_string(), "is_poisson": d.is_zero()}));
    }
    Ok(Body {
        arguments: json!({}),
        result: json!({"is_poisson": all, "charts": per}),
        checks,
        stabilized: None,
        summary: if all { "Poisson (defect 0)".into() } else { "not Poisson (defect ≠ 0)".into() },
    })
}

fn hp_affine_cmd(pf: &ProblemFile, st: &Settings, i: usize, d: i32) -> Result<Body, CliError> {
    let l = affine_lambda(pf, st)?;
    require_poisson(&l)?;
    let cx = LpComplex::new(&l).map_err(|e| input(e.to_string()))?;
    let t = cx.hp(i, d, true).map_err(|e| input(e.to_string()))?;
    let mut checks = Vec::new();
    for e in &t.entries {
        let ok = e.representatives.iter().all(|r| l.schouten(r).map(|x| x.is_zero()).unwrap_or(false));
        checks.push((format!("degree {}: representatives are cocycles", e.degree), ok));
        checks.push((format!("degree {}: one representative per dimension", e.degree), e.representatives.len() == e.dim));
    }
    let dims: Vec<usize> = t.entries.iter().map(|e| e.dim).collect();
    let result = json!({
        "index": t.index,
        "bound": t.bound,
        "graded": t.graded,
        "total": t.total(),
        "dims": dims,
        "entries": t.entries.iter().map(|e| json!({
            "degree": e.degree,
            "dim": e.dim,
            "representatives": e.representatives.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    Ok(Body {
        arguments: json!({"index": i, "degree": d}),
        result,
        checks,
        stabilized: None,
        summary: format!("HP^{i} per degree ≤ {d}: {dims:?}"),
    })
}

fn atlas_checks(a: &Atlas, checks: &mut Vec<(String, bool)>) -> Result<(), CliError> {
    let g = a.glue_check(None).map_err(cech_err)?;
    checks.push(("bivectors glue on all overlaps".into(), g.status == GlueStatus::Glued));
    for (c, l) in a.charts().iter().zip(a.bivectors()) {
        let d = jacobi_defect(l).map_err(|e| input(e.to_string()))?;
        checks.push((format!("{}: [Λ,Λ] = 0", c.name), d.is_zero()));
    }
    Ok(())
}

fn hp_cech_cmd(pf: &ProblemFile, st: &Settings, i: usize, w: i32) -> Result<Body, CliError> {
    let a = unparametrized(build_atlas(pf, st.ordered_pairs)?)?;
    let mut checks = Vec::new();
    atlas_checks(&a, &mut checks)?;
    let r = hp_cech(&a, i, w, st.max_window, true).map_err(cech_err)?;
    checks.push(("one representative per dimension".into(), r.representatives.len() == r.dim));
    let result = json!({
        "index": r.index,
        "dim": r.dim,
        "stabilized": r.stabilized,
        "window": r.window,
        "used_max_window": r.used_max_window,
        "history": history_json(&r.history),
        "representatives": r.representatives.iter().map(|c| cochain_json(&a, c)).collect::<Vec<_>>(),
    });
    Ok(Body {
        arguments: json!({"index": i, "start_window": w}),
        result,
        checks,
        stabilized: Some(r.stabilized),
        summary: format!("dim HP^{i} = {} (window {}, stabilized={})", r.dim, r.window, r.stabilized),
    })
}

fn sections_cmd(pf: &ProblemFile, st: &Settings, q: usize, w: i32) -> Result<Body, CliError> {
    let a = unparametrized(build_atlas(pf, st.ordered_pairs)?)?;
    let r = global_sections(&a, q, w, st.max_window).map_err(cech_err)?;
    let poly_everywhere = r.per_chart.iter().all(|v| v.iter().all(|p| !p.is_laurent()));
    let checks = vec![
        ("sections are polynomial on every chart".to_string(), poly_everywhere),
        ("one section per dimension".to_string(), r.sections.len() == r.dim),
    ];
    let per_chart: Vec<Value> = r
        .per_chart
        .iter()
        .map(|v| Value::Object(a.charts().iter().zip(v).map(|(c, p)| (c.name.clone(), Value::String(p.to_string()))).collect()))
        .collect();
    let result = json!({
        "degree": q,
        "dim": r.dim,
        "stabilized": r.stabilized,
        "window": r.window,
        "used_max_window": r.used_max_window,
        "history": history_json(&r.history),
        "sections": r.sections.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "per_chart": per_chart,
    });
    Ok(Body {
        arguments: json!({"degree": q, "start_window": w}),
        result,
        checks,
        stabilized: Some(r.stabilized),
        summary: format!("dim H^0(∧^{q} T) = {} (window {}, stabilized={})", r.dim, r.window, r.stabilized),
    })
}

fn glue_cmd(pf: &ProblemFile, st: &Settings, window: Option<i32>) -> Result<Body, CliError> {
    let a = build_atlas(pf, st.ordered_pairs)?;
    let g = a.glue_check(window).map_err(cech_err)?;
    let name = |k: usize| a.charts()[k].name.clone();
    let mut checks = Vec::new();
    let mut pairs = Vec::new();
    for p in &g.pairs {
        if let Some(h) = p.holds {
            checks.push((format!("f_{}{}* Λ_{} = Λ_{}", name(p.j), name(p.k), name(p.k), name(p.j)), h));
        }
        pairs.push(json!({"target": name(p.j), "source": name(p.k), "holds": p.holds, "difference": p.difference}));
    }
    let status = match g.status {
        GlueStatus::Glued => "glued",
        GlueStatus::Failed => "failed",
        GlueStatus::Inconclusive => "inconclusive",
    };
    Ok(Body {
        arguments: json!({"window": window}),
        result: json!({"status": status, "pairs": pairs}),
        checks,
        stabilized: Some(g.status != GlueStatus::Inconclusive),
        summary: format!("{status} ({} ordered pairs)", g.pairs.len()),
    })
}

fn ks_cmd(pf: &ProblemFile, st: &Settings) -> Result<Body, CliError> {
    let a = build_atlas(pf, st.ordered_pairs)?;
    let np = a.params().len();
    if np == 0 {
        return Err(input("ks-class needs a family: declare `params` in [vars] or use a parametrised builtin"));
    }
    let dir = match &pf.family.direction {
        Some(d) => d.clone(),
        None if np == 1 => vec![Scalar::from_integer(1.into())],
        None => return Err(input("several parameters: give `direction = ...` in [family]")),
    };
    let k = ks_class(&a, &dir, None, st.window, st.max_window).map_err(cech_err)?;
    let name = |j: usize| a.charts()[j].name.clone();
    let theta: serde_json::Map<String, Value> =
        k.theta.iter().map(|((j, l), p)| (format!("{},{}", name(*j), name(*l)), Value::String(p.to_string()))).collect();
    let lp: serde_json::Map<String, Value> =
        k.lambda_prime.iter().enumerate().map(|(j, p)| (name(j), Value::String(p.to_string()))).collect();
    let result = json!({
        "direction": svec(&dir),
        "theta": theta,
        "lambda_prime": lp,
        "hp2_dim": k.hp2_dim,
        "coordinates": svec(&k.coordinates),
        "trivial": k.is_trivial(),
        "stabilized": k.stabilized,
        "window": k.window,
        "used_max_window": k.used_max_window,
        "basis": k.basis.iter().map(|c| cochain_json(&a, c)).collect::<Vec<_>>(),
    });
    Ok(Body {
        arguments: json!({}),
        result,
        checks: k.checks.clone(),
        stabilized: Some(k.stabilized),
        summary: format!(
            "class coordinates [{}] in HP^2 of dim {}",
            k.coordinates.iter().map(fmt_scalar).collect::<Vec<_>>().join(", "),
            k.hp2_dim
        ),
    })
}

fn fdgla(pf: &ProblemFile) -> Result<FDGLA, CliError> {
    let spec = pf.dgla.as_ref().ok_or_else(|| input("this command needs a [dgla] section"))?;
    let mut p = spec.presentation.clone();
    if spec.complete {
        p.complete_antisymmetry();
    }
    FDGLA::validate(&p).map_err(|e| match e {
        poisson_core::dgla::DglaError::Invalid(v) => input_obj(
            format!("not a DGLA: {} axiom violation(s)", v.len()),
            v.iter().take(10).map(|x| x.to_string()).collect::<Vec<_>>().join("; "),
        ),
        other => input(other.to_string()),
    })
}

/// β₁ = Σ_v t_v · (harmonic vector v); rows of `beta1` are coordinates in
/// the harmonic basis, defaulting to the basis itself.
fn initial_term(pf: &ProblemFile, hb: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>, CliError> {
    if pf.family.beta1.is_empty() {
        return Ok(hb.to_vec());
    }
    let mut out = Vec::new();
    for row in &pf.family.beta1 {
        if row.len() != hb.len() {
            return Err(input(format!("beta1 row has {} entries, the harmonic basis has {}", row.len(), hb.len())));
        }
        let n = hb.first().map(|v| v.len()).unwrap_or(0);
        let mut v = vec![Scalar::zero(); n];
        for (c, h) in row.iter().zip(hb) {
            for (a, b) in v.iter_mut().zip(h) {
                *a += c * b;
            }
        }
        out.push(v);
    }
    Ok(out)
}

fn mc_cmd(pf: &ProblemFile, n: u32) -> Result<Body, CliError> {
    let g = fdgla(pf)?;
    if g.top_degree() < 1 {
        return Err(input("the DGLA has no degree-1 part"));
    }
    let h = hodge(&g);
    let mut checks: Vec<(String, bool)> = h.checks(&g);
    let hb = harmonic_basis(&h, 1);
    let b1 = initial_term(pf, &hb)?;
    let s = kuranishi_solve(&g, &h, &GSeries::linear(1, &b1), n).map_err(|e| input(e.to_string()))?;
    let res = mc_residual(&s);
    let obs = obstruction(&s);
    let unobstructed = is_unobstructed(&s);
    let first = obs.iter().find(|(_, v)| !v.is_zero()).map(|(mu, _)| *mu);
    checks.push(("fixed-point equation holds".into(), s.fixed_point_defect().is_zero()));
    checks.push(("residual vanishes iff every obstruction vanishes".into(), res.is_zero() == unobstructed));
    let result = json!({
        "order": n,
        "harmonic_basis": hb.iter().map(|v| svec(v)).collect::<Vec<_>>(),
        "beta1": b1.iter().map(|v| svec(v)).collect::<Vec<_>>(),
        "coefficients": s.coefficients.iter().enumerate().map(|(k, c)| json!({"mu": k + 1, "terms": gseries_json(c)})).collect::<Vec<_>>(),
        "residual": gseries_json(&res),
        "residual_zero": res.is_zero(),
        "obstructions": obs.iter().map(|(mu, v)| json!({"mu": mu, "terms": gseries_json(v)})).collect::<Vec<_>>(),
        "unobstructed": unobstructed,
        "first_obstruction_order": first,
    });
    Ok(Body {
        arguments: json!({"order": n}),
        result,
        checks,
        stabilized: None,
        summary: match first {
            None => format!("Maurer–Cartan solution to order {n}, residual ≡ 0"),
            Some(mu) => format!("obstructed at order {mu}"),
        },
    })
}

fn jacobi_order(n: u32) -> Result<usize, CliError> {
    if n == 0 {
        Err(input("the Jacobi order must be at least 1"))
    } else {
        Ok(n as usize)
    }
}

fn jacobi_cmd(pf: &ProblemFile, n: u32) -> Result<Body, CliError> {
    let g = fdgla(pf)?;
    let j = build_jacobi(&g, jacobi_order(n)?).map_err(|e| input(e.to_string()))?;
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for ms in j.blocks().values() {
        for m in ms {
            *dims.entry(total_degree(m)).or_default() += 1;
        }
    }
    let h0 = jacobi_h0(&j);
    let checks = j.identity_checks();
    let result = json!({
        "n": n,
        "dims": dims.iter().map(|(i, d)| json!({"degree": i, "dim": d})).collect::<Vec<_>>(),
        "h0_dim": h0.dim,
        "h0_representatives": h0.representatives.iter().map(chain_json).collect::<Vec<_>>(),
        "grading_conflicts": j.grading_conflicts().iter().map(|m| mono_name(m)).collect::<Vec<_>>(),
    });
    Ok(Body {
        arguments: json!({"n": n}),
        result,
        checks,
        stabilized: None,
        summary: format!("J_{n}: dim ℍ⁰ = {}", h0.dim),
    })
}

fn base_ring_cmd(pf: &ProblemFile, n: u32) -> Result<Body, CliError> {
    let g = fdgla(pf)?;
    let j = build_jacobi(&g, jacobi_order(n)?).map_err(|e| input(e.to_string()))?;
    let r = base_ring(&j);
    let table: Vec<Value> = r.table.iter().map(|row| Value::Array(row.iter().map(|v| svec(v)).collect())).collect();
    let result = json!({
        "n": n,
        "dim": r.dim(),
        "h0_dim": r.h0.dim,
        "nilpotency_exponent": r.nilpotency_exponent(),
        "table": table,
    });
    Ok(Body {
        arguments: json!({"n": n}),
        result,
        checks: r.checks(),
        stabilized: None,
        summary: format!("base ring of dimension {} (nilpotency exponent {})", r.dim(), r.nilpotency_exponent()),
    })
}

fn morphic_cmd(pf: &ProblemFile, n: u32) -> Result<Body, CliError> {
    let g = fdgla(pf)?;
    let order = jacobi_order(n)?;
    if g.top_degree() < 1 {
        return Err(input("the DGLA has no degree-1 part"));
    }
    let h = hodge(&g);
    let hb = harmonic_basis(&h, 1);
    let b1 = initial_term(pf, &hb)?;
    if b1.is_empty() {
        return Err(input("H¹ is zero: there is no first-order direction to extend"));
    }
    let s = kuranishi_solve(&g, &h, &GSeries::linear(1, &b1), n).map_err(|e| input(e.to_string()))?;
    let j = build_jacobi(&g, order).map_err(|e| input(e.to_string()))?;
    let ring = base_ring(&j);
    let v = morphic_assemble(&s.total(), order, n).map_err(|e| input(e.to_string()))?;
    let closed = v.is_closed(&j);
    let mc = mc_residual(&s).is_zero();
    let mut checks = vec![
        ("Δ′(v) = v ⊗ v".to_string(), v.is_grouplike()),
        ("closed iff β satisfies Maurer–Cartan".to_string(), closed == mc),
    ];
    let mut images = Value::Null;
    if closed {
        let f = morphic_to_hom(&v, &ring, &j).map_err(|e| input(e.to_string()))?;
        checks.push(("induced map is multiplicative".to_string(), f.is_multiplicative(&ring)));
        images = Value::Array(f.images.iter().map(|p| Value::String(p.to_string())).collect());
    }
    let comps: serde_json::Map<String, Value> =
        v.components.iter().map(|(m, p)| (mono_name(m), Value::String(p.to_string()))).collect();
    let result = json!({
        "n": n,
        "params": v.params.names(),
        "components": comps,
        "closed": closed,
        "hom_images": images,
    });
    Ok(Body {
        arguments: json!({}),
        result,
        checks,
        stabilized: None,
        summary: if closed { "closed morphic element; ring map computed".into() } else { "element is not closed".into() },
    })
}

fn presentation(pf: &ProblemFile, st: &Settings, with_ideal: bool) -> Result<PoissonPresentation, CliError> {
    let l = affine_lambda(pf, st)?;
    require_poisson(&l)?;
    let ideal: &[MultiPoly] = if with_ideal { &pf.ideal } else { &[] };
    PoissonPresentation::new(&l, ideal).map_err(|e| input(e.to_string()))
}

fn pt0_cmd(pf: &ProblemFile, st: &Settings, d: i32) -> Result<Body, CliError> {
    if !pf.ideal.is_empty() {
        return Err(input("pt0 is computed for the polynomial ring; remove [ideal]"));
    }
    let p = presentation(pf, st, false)?;
    let r = poisson_derivations(&p, d).map_err(|e| input(e.to_string()))?;
    let ok = r.blocks.iter().all(|b| b.representatives.iter().all(|x| p.lambda.schouten(x).map(|y| y.is_zero()).unwrap_or(false)));
    Ok(Body {
        arguments: json!({"degree": d}),
        result: degree_report_json(&r),
        checks: vec![("representatives satisfy [Λ,X] = 0".into(), ok)],
        stabilized: None,
        summary: format!("Poisson derivations per degree ≤ {d}: {:?}", r.dims()),
    })
}

fn pt1_cmd(pf: &ProblemFile, st: &Settings, d: i32) -> Result<Body, CliError> {
    let p = presentation(pf, st, true)?;
    let ic = is_poisson_ideal(&p).map_err(|e| input(e.to_string()))?;
    if let Some(f) = ic.failing {
        return Err(input_obj(
            "the ideal is not Poisson",
            format!("{{{}, {}}} ≡ {} mod I", p.vars.name(f.variable), p.ideal[f.generator], f.remainder),
        ));
    }
    let m = match pf.options.module.unwrap_or(ModuleKind::Quotient) {
        ModuleKind::Quotient => QuotientModule::quotient(&p, &p.ideal).map_err(|e| input(e.to_string()))?,
        ModuleKind::Zero => QuotientModule::zero(&p),
    };
    let gdeg = p.ideal.iter().filter_map(|g| g.total_degree()).max().unwrap_or(0);
    let axioms = validate_module(&p, &m, gdeg + d);
    let mut checks = vec![("module axioms".to_string(), axioms.all_hold())];
    let r = pt1_surjection(&p, &m, d).map_err(|e| input(e.to_string()))?;
    for b in &r.blocks {
        let mut ok = true;
        for h in &b.homs {
            ok &= verify_hom(&p, &m, h, r.check_degree).map(|a| a.all_hold()).unwrap_or(false);
        }
        checks.push((format!("degree {}: maps are Poisson-module homomorphisms", b.degree), ok));
    }
    let result = json!({
        "module": if m.is_zero_module() { "zero" } else { "quotient" },
        "exact": r.exact,
        "check_degree": r.check_degree,
        "dims": r.dims(),
        "blocks": r.blocks.iter().map(|b| json!({
            "degree": b.degree,
            "dim": b.dim,
            "maps": b.homs.iter().map(|h| h.images.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    Ok(Body {
        arguments: json!({"degree": d}),
        result,
        checks,
        stabilized: None,
        summary: format!("PT^1 per degree ≤ {d}: {:?}{}", r.dims(), if r.exact { "" } else { " (conservative)" }),
    })
}

fn fod_cmd(pf: &ProblemFile, st: &Settings, d: i32) -> Result<Body, CliError> {
    if !pf.ideal.is_empty() {
        return Err(input("fod is computed for the polynomial ring; remove [ideal]"));
    }
    let p = presentation(pf, st, false)?;
    let r = first_order_deformations(&p, d).map_err(|e| input(e.to_string()))?;
    let l0 = &p.lambda;
    let mut first_order = true;
    for b in &r.blocks {
        for l1 in &b.representatives {
            first_order &= is_first_order_poisson(l0, l1).unwrap_or(false);
        }
    }
    // gauge: Λ′ and Λ′ + [Λ₀, X] are related by x ↦ x + εX for a seeded random X
    let mut rng = random::rng(st.seed);
    let x = random::polyvector(&mut rng, &p.vars, 1, 1);
    let mut gauge = true;
    let zero = PolyVector::zero(&p.vars, p.nvars(), 2);
    let samples: Vec<&PolyVector> =
        std::iter::once(&zero).chain(r.blocks.iter().filter_map(|b| b.representatives.first())).collect();
    for l1 in samples {
        let l2 = l1.add(&l0.schouten(&x).map_err(|e| input(e.to_string()))?);
        gauge &= substitution_relates(l0, l1, &l2, &x).unwrap_or(false);
    }
    Ok(Body {
        arguments: json!({"degree": d}),
        result: json!({"deformations": degree_report_json(&r), "gauge_field": x.to_string()}),
        checks: vec![
            ("representatives are first-order Poisson".into(), first_order),
            ("gauge-equivalent deformations are related by x ↦ x + εX".into(), gauge),
        ],
        stabilized: None,
        summary: format!("first-order deformations per degree ≤ {d}: {:?}", r.dims()),
    })
}
