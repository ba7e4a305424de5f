//! Problem files: a line-oriented, sectioned text format.
//!
//! ```text
//! # comment
//! [vars]
//! coords = x w
//! params = t
//! [bivector]
//! 1 ; 1 0 ; 1^2          # coeff ; exponents ; i^j (1-based)
//! [ideal]
//! x^2 - y
//! [atlas]
//! builtin = pn 2         # or: hirzebruch m k g0 g1 ...
//! order = 1
//! chart U0 = x           # explicit atlases instead of builtin
//! map U1 <- U0 : y = 1 / x
//! lambda U0 : 1 ; 2 ; 1^1
//! [dgla]
//! dims = 0 2 1
//! complete = true
//! d 1 0 1 = 1            # component 0 of L e_1, e_1 in degree 1
//! b 1 0 1 0 0 = 1        # component 0 of [e_0, e_0], both in degree 1
//! [family]
//! direction = 1
//! beta1 = 1 0
//! [options]
//! ordered_pairs = true
//! ```
//!
//! Numbers are exact rationals (`3`, `-3/2`). In transitions the division
//! slash must be surrounded by spaces; `3/2` without spaces is a literal.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use poisson_core::dgla::DglaPresentation;
use poisson_core::exact_algebra::scalar::{fmt_scalar, parse_scalar};
use poisson_core::exact_algebra::{MultiPoly, Scalar, Vars};
use poisson_core::multivector::BivectorTerm;
use thiserror::Error;

use crate::poly_parse::{is_monomial, parse_poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn perr<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartSpec {
    pub name: String,
    pub coords: Vec<String>,
}

/// `target <- source`: one `(target coordinate, numerator, denominator)` per
/// target coordinate, polynomials in the source ring (coordinates + params).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSpec {
    pub target: String,
    pub source: String,
    pub components: Vec<(String, MultiPoly, MultiPoly)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtlasKind {
    Pn(usize),
    Hirzebruch { m: i32, k: i32, g: Vec<Scalar> },
    Explicit { charts: Vec<ChartSpec>, maps: Vec<MapSpec>, lambdas: Vec<(String, BivectorTerm)> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasSpec {
    pub kind: AtlasKind,
    pub order: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DglaSpec {
    pub presentation: DglaPresentation,
    /// add missing mirror bracket entries before validation
    pub complete: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilySpec {
    pub direction: Option<Vec<Scalar>>,
    /// one row per parameter: coordinates in the harmonic basis of g₁
    pub beta1: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub window: Option<i32>,
    pub max_window: Option<i32>,
    pub degree: Option<i32>,
    pub order: Option<u32>,
    pub ordered_pairs: Option<bool>,
    pub seed: Option<u64>,
    pub module: Option<ModuleKind>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    Quotient,
    Zero,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProblemFile {
    pub coords: Vec<String>,
    pub params: Vec<String>,
    pub bivector: Vec<BivectorTerm>,
    pub ideal: Vec<MultiPoly>,
    pub atlas: Option<AtlasSpec>,
    pub dgla: Option<DglaSpec>,
    pub family: FamilySpec,
    pub options: Options,
}

const SECTIONS: [&str; 7] = ["vars", "bivector", "ideal", "atlas", "dgla", "family", "options"];

type Lines = Vec<(usize, String)>;

fn split_sections(text: &str) -> Result<Vec<(String, usize, Lines)>, ParseError> {
    let mut out: Vec<(String, usize, Lines)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').map(str::trim);
            match name {
                Some(n) if SECTIONS.contains(&n) => {
                    if !seen.insert(n.to_string()) {
                        return perr(ln, format!("section [{n}] appears twice"));
                    }
                    out.push((n.to_string(), ln, Vec::new()));
                }
                Some(n) => return perr(ln, format!("unknown section [{n}]")),
                None => return perr(ln, "malformed section header"),
            }
            continue;
        }
        match out.last_mut() {
            Some((_, _, lines)) => lines.push((ln, line.to_string())),
            None => return perr(ln, "content before the first section header"),
        }
    }
    Ok(out)
}

fn key_value(ln: usize, line: &str) -> Result<(String, String), ParseError> {
    match line.split_once('=') {
        Some((k, v)) => Ok((k.trim().to_string(), v.trim().to_string())),
        None => perr(ln, format!("expected `key = value`, got `{line}`")),
    }
}

fn scalar(ln: usize, s: &str) -> Result<Scalar, ParseError> {
    parse_scalar(s).or_else(|_| perr(ln, format!("`{s}` is not an exact rational")))
}

fn scalars(ln: usize, s: &str) -> Result<Vec<Scalar>, ParseError> {
    s.split_whitespace().map(|t| scalar(ln, t)).collect()
}

fn integer<T: std::str::FromStr>(ln: usize, s: &str, what: &str) -> Result<T, ParseError> {
    s.trim().parse().or_else(|_| perr(ln, format!("{what}: `{s}` is not a valid integer")))
}

fn boolean(ln: usize, s: &str) -> Result<bool, ParseError> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => perr(ln, format!("expected true or false, got `{s}`")),
    }
}

fn names(ln: usize, s: &str) -> Result<Vec<String>, ParseError> {
    let v: Vec<String> = s.split_whitespace().map(String::from).collect();
    for n in &v {
        if !n.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            || !n.chars().all(|c| c.is_alphanumeric() || c == '_')
        {
            return perr(ln, format!("`{n}` is not a valid name"));
        }
    }
    let set: BTreeSet<&String> = v.iter().collect();
    if set.len() != v.len() {
        return perr(ln, "repeated name");
    }
    Ok(v)
}

fn set_once<T>(ln: usize, slot: &mut Option<T>, v: T, key: &str) -> Result<(), ParseError> {
    if slot.is_some() {
        return perr(ln, format!("`{key}` given twice"));
    }
    *slot = Some(v);
    Ok(())
}

/// `coeff ; e1 e2 ... ; i^j` with `nexp` exponents.
fn bivector_term(ln: usize, s: &str, nexp: usize) -> Result<BivectorTerm, ParseError> {
    let parts: Vec<&str> = s.split(';').map(str::trim).collect();
    if parts.len() != 3 {
        return perr(ln, "bivector term must be `coeff ; exponents ; i^j`");
    }
    let coeff = scalar(ln, parts[0])?;
    let exponents: Vec<i32> =
        parts[1].split_whitespace().map(|t| integer(ln, t, "exponent")).collect::<Result<_, _>>()?;
    if exponents.len() != nexp {
        return perr(ln, format!("expected {nexp} exponents, got {}", exponents.len()));
    }
    let (i, j) = parts[2].split_once('^').map(|(a, b)| (a.trim(), b.trim())).ok_or(ParseError {
        line: ln,
        message: format!("expected `i^j`, got `{}`", parts[2]),
    })?;
    let i: usize = integer(ln, i, "index")?;
    let j: usize = integer(ln, j, "index")?;
    Ok(BivectorTerm { coeff, exponents, i, j })
}

fn fmt_term(t: &BivectorTerm) -> String {
    let e: Vec<String> = t.exponents.iter().map(|x| x.to_string()).collect();
    format!("{} ; {} ; {}^{}", fmt_scalar(&t.coeff), e.join(" "), t.i, t.j)
}

fn fmt_scalars(v: &[Scalar]) -> String {
    v.iter().map(fmt_scalar).collect::<Vec<_>>().join(" ")
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let sections = split_sections(text)?;
        let mut pf = ProblemFile::default();
        let get = |name: &str| sections.iter().find(|s| s.0 == name);
        if let Some((_, _, lines)) = get("vars") {
            let (mut coords, mut params) = (None, None);
            for (ln, line) in lines {
                let (k, v) = key_value(*ln, line)?;
                match k.as_str() {
                    "coords" => set_once(*ln, &mut coords, names(*ln, &v)?, "coords")?,
                    "params" => set_once(*ln, &mut params, names(*ln, &v)?, "params")?,
                    _ => return perr(*ln, format!("unknown key `{k}` in [vars]")),
                }
            }
            pf.coords = coords.unwrap_or_default();
            pf.params = params.unwrap_or_default();
            if pf.coords.iter().any(|c| pf.params.contains(c)) {
                return perr(lines[0].0, "a name is both a coordinate and a parameter");
            }
        }
        let nexp = pf.coords.len() + pf.params.len();
        if let Some((_, hl, lines)) = get("bivector") {
            if pf.coords.is_empty() {
                return perr(*hl, "[bivector] needs coordinates declared in [vars]");
            }
            for (ln, line) in lines {
                pf.bivector.push(bivector_term(*ln, line, nexp)?);
            }
        }
        if let Some((_, hl, lines)) = get("ideal") {
            if pf.coords.is_empty() {
                return perr(*hl, "[ideal] needs coordinates declared in [vars]");
            }
            let vars = Vars::new(pf.coords.iter().cloned());
            for (ln, line) in lines {
                let p = parse_poly(line, &vars).or_else(|e| perr(*ln, e))?;
                if p.is_laurent() {
                    return perr(*ln, "ideal generators must be polynomials");
                }
                pf.ideal.push(p);
            }
        }
        if let Some((_, hl, lines)) = get("atlas") {
            pf.atlas = Some(parse_atlas(*hl, lines, &pf.params)?);
        }
        if let Some((_, _, lines)) = get("dgla") {
            pf.dgla = Some(parse_dgla(lines)?);
        }
        if let Some((_, _, lines)) = get("family") {
            for (ln, line) in lines {
                let (k, v) = key_value(*ln, line)?;
                match k.as_str() {
                    "direction" => set_once(*ln, &mut pf.family.direction, scalars(*ln, &v)?, "direction")?,
                    "beta1" => pf.family.beta1.push(scalars(*ln, &v)?),
                    _ => return perr(*ln, format!("unknown key `{k}` in [family]")),
                }
            }
        }
        if let Some((_, _, lines)) = get("options") {
            let o = &mut pf.options;
            for (ln, line) in lines {
                let (k, v) = key_value(*ln, line)?;
                let ln = *ln;
                match k.as_str() {
                    "window" => set_once(ln, &mut o.window, integer(ln, &v, "window")?, "window")?,
                    "max_window" => set_once(ln, &mut o.max_window, integer(ln, &v, "max_window")?, "max_window")?,
                    "degree" => set_once(ln, &mut o.degree, integer(ln, &v, "degree")?, "degree")?,
                    "order" => set_once(ln, &mut o.order, integer(ln, &v, "order")?, "order")?,
                    "ordered_pairs" => set_once(ln, &mut o.ordered_pairs, boolean(ln, &v)?, "ordered_pairs")?,
                    "seed" => set_once(ln, &mut o.seed, integer(ln, &v, "seed")?, "seed")?,
                    "module" => {
                        let m = match v.as_str() {
                            "quotient" => ModuleKind::Quotient,
                            "zero" => ModuleKind::Zero,
                            _ => return perr(ln, format!("module must be `quotient` or `zero`, got `{v}`")),
                        };
                        set_once(ln, &mut o.module, m, "module")?
                    }
                    _ => return perr(ln, format!("unknown key `{k}` in [options]")),
                }
            }
        }
        Ok(pf)
    }

    /// Canonical text; parsing it gives back an equal structure.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn parse_atlas(hl: usize, lines: &Lines, params: &[String]) -> Result<AtlasSpec, ParseError> {
    let mut builtin: Option<AtlasKind> = None;
    let mut order = None;
    let mut charts: Vec<ChartSpec> = Vec::new();
    let mut map_lines = Vec::new();
    let mut lambda_lines = Vec::new();
    for (ln, line) in lines {
        let ln = *ln;
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line.as_str(), ""));
        match head {
            "chart" => {
                let (name, coords) = key_value(ln, rest)?;
                let name = names(ln, &name)?.pop().ok_or(ParseError { line: ln, message: "chart without a name".into() })?;
                if charts.iter().any(|c| c.name == name) {
                    return perr(ln, format!("chart {name} declared twice"));
                }
                let coords = names(ln, &coords)?;
                if coords.iter().any(|c| params.contains(c)) {
                    return perr(ln, "chart coordinate clashes with a parameter");
                }
                charts.push(ChartSpec { name, coords });
            }
            "map" => map_lines.push((ln, rest.to_string())),
            "lambda" => lambda_lines.push((ln, rest.to_string())),
            _ => {
                let (k, v) = key_value(ln, line)?;
                match k.as_str() {
                    "order" => set_once(ln, &mut order, integer(ln, &v, "order")?, "order")?,
                    "builtin" => {
                        let t: Vec<&str> = v.split_whitespace().collect();
                        let kind = match t.first().copied() {
                            Some("pn") if t.len() == 2 => AtlasKind::Pn(integer(ln, t[1], "n")?),
                            Some("hirzebruch") if t.len() >= 3 => AtlasKind::Hirzebruch {
                                m: integer(ln, t[1], "m")?,
                                k: integer(ln, t[2], "k")?,
                                g: t[3..].iter().map(|s| scalar(ln, s)).collect::<Result<_, _>>()?,
                            },
                            _ => return perr(ln, format!("unknown builtin `{v}` (expected `pn n` or `hirzebruch m k g...`)")),
                        };
                        set_once(ln, &mut builtin, kind, "builtin")?
                    }
                    _ => return perr(ln, format!("unknown key `{k}` in [atlas]")),
                }
            }
        }
    }
    let kind = match builtin {
        Some(b) => {
            if !charts.is_empty() || !map_lines.is_empty() {
                return perr(hl, "a builtin atlas cannot also declare charts or maps");
            }
            if let Some((ln, _)) = lambda_lines.first() {
                return perr(*ln, "a builtin atlas takes its bivector from [bivector]");
            }
            b
        }
        None => {
            if charts.is_empty() {
                return perr(hl, "[atlas] needs `builtin = ...` or chart declarations");
            }
            let find = |ln: usize, n: &str| -> Result<&ChartSpec, ParseError> {
                charts.iter().find(|c| c.name == n).ok_or(ParseError { line: ln, message: format!("unknown chart `{n}`") })
            };
            let mut maps = Vec::new();
            for (ln, rest) in &map_lines {
                let ln = *ln;
                let (head, body) = rest.split_once(':').ok_or(ParseError { line: ln, message: "expected `map T <- S : ...`".into() })?;
                let (t, s) = head.split_once("<-").ok_or(ParseError { line: ln, message: "expected `T <- S`".into() })?;
                let (t, s) = (find(ln, t.trim())?, find(ln, s.trim())?);
                if t.name == s.name {
                    return perr(ln, "a map needs two distinct charts");
                }
                if maps.iter().any(|m: &MapSpec| m.target == t.name && m.source == s.name) {
                    return perr(ln, format!("map {} <- {} given twice", t.name, s.name));
                }
                let src = Vars::new(s.coords.iter().chain(params.iter()).cloned());
                let mut comps: Vec<(String, MultiPoly, MultiPoly)> = Vec::new();
                for c in body.split(';') {
                    let (var, rhs) = key_value(ln, c)?;
                    if !t.coords.contains(&var) {
                        return perr(ln, format!("`{var}` is not a coordinate of chart {}", t.name));
                    }
                    if comps.iter().any(|x| x.0 == var) {
                        return perr(ln, format!("`{var}` assigned twice"));
                    }
                    let (num, den) = rhs.split_once(" / ").ok_or(ParseError {
                        line: ln,
                        message: format!("`{var} = {rhs}`: expected `numerator / monomial` with spaces around `/`"),
                    })?;
                    let num = parse_poly(num.trim(), &src).or_else(|e| perr(ln, e))?;
                    let den = parse_poly(den.trim(), &src).or_else(|e| perr(ln, e))?;
                    if !is_monomial(&den) {
                        return perr(ln, format!("denominator of `{var}` is not a monomial"));
                    }
                    comps.push((var, num, den));
                }
                if comps.len() != t.coords.len() {
                    return perr(ln, format!("map into {} must assign every coordinate", t.name));
                }
                comps.sort_by_key(|c| t.coords.iter().position(|x| *x == c.0));
                maps.push(MapSpec { target: t.name.clone(), source: s.name.clone(), components: comps });
            }
            let mut lambdas = Vec::new();
            for (ln, rest) in &lambda_lines {
                let (name, term) = rest.split_once(':').ok_or(ParseError { line: *ln, message: "expected `lambda CHART : term`".into() })?;
                let c = find(*ln, name.trim())?;
                lambdas.push((c.name.clone(), bivector_term(*ln, term, c.coords.len() + params.len())?));
            }
            AtlasKind::Explicit { charts, maps, lambdas }
        }
    };
    Ok(AtlasSpec { kind, order })
}

fn parse_dgla(lines: &Lines) -> Result<DglaSpec, ParseError> {
    let mut spec = DglaSpec::default();
    let mut dims = None;
    let mut complete = None;
    for (ln, line) in lines {
        let ln = *ln;
        let (k, v) = key_value(ln, line)?;
        let f: Vec<&str> = k.split_whitespace().collect();
        match f.as_slice() {
            ["dims"] => set_once(
                ln,
                &mut dims,
                v.split_whitespace().map(|t| integer(ln, t, "dimension")).collect::<Result<Vec<usize>, _>>()?,
                "dims",
            )?,
            ["complete"] => set_once(ln, &mut complete, boolean(ln, &v)?, "complete")?,
            ["d", a, i, j] => spec.presentation.differential.push((
                integer(ln, a, "degree")?,
                integer(ln, i, "index")?,
                integer(ln, j, "index")?,
                scalar(ln, &v)?,
            )),
            ["b", a, i, b, j, kk] => spec.presentation.bracket.push((
                integer(ln, a, "degree")?,
                integer(ln, i, "index")?,
                integer(ln, b, "degree")?,
                integer(ln, j, "index")?,
                integer(ln, kk, "index")?,
                scalar(ln, &v)?,
            )),
            _ => return perr(ln, format!("unknown entry `{k}` in [dgla]")),
        }
    }
    spec.presentation.dims = dims.ok_or(ParseError {
        line: lines.first().map(|l| l.0).unwrap_or(0),
        message: "[dgla] needs `dims = ...`".into(),
    })?;
    spec.complete = complete.unwrap_or(false);
    Ok(spec)
}

impl fmt::Display for ProblemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        if !self.coords.is_empty() || !self.params.is_empty() {
            s.push_str("[vars]\n");
            if !self.coords.is_empty() {
                writeln!(s, "coords = {}", self.coords.join(" "))?;
            }
            if !self.params.is_empty() {
                writeln!(s, "params = {}", self.params.join(" "))?;
            }
        }
        if !self.bivector.is_empty() {
            s.push_str("[bivector]\n");
            for t in &self.bivector {
                writeln!(s, "{}", fmt_term(t))?;
            }
        }
        if !self.ideal.is_empty() {
            s.push_str("[ideal]\n");
            for g in &self.ideal {
                writeln!(s, "{g}")?;
            }
        }
        if let Some(a) = &self.atlas {
            s.push_str("[atlas]\n");
            match &a.kind {
                AtlasKind::Pn(n) => writeln!(s, "builtin = pn {n}")?,
                AtlasKind::Hirzebruch { m, k, g } => {
                    let gs = if g.is_empty() { String::new() } else { format!(" {}", fmt_scalars(g)) };
                    writeln!(s, "builtin = hirzebruch {m} {k}{gs}")?
                }
                AtlasKind::Explicit { charts, maps, lambdas } => {
                    for c in charts {
                        writeln!(s, "chart {} = {}", c.name, c.coords.join(" "))?;
                    }
                    for m in maps {
                        let comps: Vec<String> = m.components.iter().map(|(v, n, d)| format!("{v} = {n} / {d}")).collect();
                        writeln!(s, "map {} <- {} : {}", m.target, m.source, comps.join(" ; "))?;
                    }
                    for (c, t) in lambdas {
                        writeln!(s, "lambda {c} : {}", fmt_term(t))?;
                    }
                }
            }
            if let Some(o) = a.order {
                writeln!(s, "order = {o}")?;
            }
        }
        if let Some(d) = &self.dgla {
            s.push_str("[dgla]\n");
            let dims: Vec<String> = d.presentation.dims.iter().map(|x| x.to_string()).collect();
            writeln!(s, "dims = {}", dims.join(" "))?;
            if d.complete {
                s.push_str("complete = true\n");
            }
            for (a, i, j, c) in &d.presentation.differential {
                writeln!(s, "d {a} {i} {j} = {}", fmt_scalar(c))?;
            }
            for (a, i, b, j, k, c) in &d.presentation.bracket {
                writeln!(s, "b {a} {i} {b} {j} {k} = {}", fmt_scalar(c))?;
            }
        }
        if self.family != FamilySpec::default() {
            s.push_str("[family]\n");
            if let Some(d) = &self.family.direction {
                writeln!(s, "direction = {}", fmt_scalars(d))?;
            }
            for b in &self.family.beta1 {
                writeln!(s, "beta1 = {}", fmt_scalars(b))?;
            }
        }
        let o = &self.options;
        if *o != Options::default() {
            s.push_str("[options]\n");
            if let Some(v) = o.window {
                writeln!(s, "window = {v}")?;
            }
            if let Some(v) = o.max_window {
                writeln!(s, "max_window = {v}")?;
            }
            if let Some(v) = o.degree {
                writeln!(s, "degree = {v}")?;
            }
            if let Some(v) = o.order {
                writeln!(s, "order = {v}")?;
            }
            if let Some(v) = o.ordered_pairs {
                writeln!(s, "ordered_pairs = {v}")?;
            }
            if let Some(v) = o.seed {
                writeln!(s, "seed = {v}")?;
            }
            if let Some(m) = o.module {
                writeln!(s, "module = {}", if m == ModuleKind::Quotient { "quotient" } else { "zero" })?;
            }
        }
        f.write_str(&s)
    }
}
