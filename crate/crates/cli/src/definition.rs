//! The `corad-model v1` definition format and the loaders behind it.
//!
//! One human-writable, line-oriented text file per model. `#` starts a
//! comment, blank lines are ignored, and the first meaningful line must be
//! the versioned header `corad-model v1` followed by `kind <tag>`. Scalar
//! parameters are `key = value` lines; sparse matrix data lives in
//! `[section]` blocks as `row col value` triples with exact rational
//! literals `p/q`. The full grammar is documented in the repository README.
//!
//! Loading is two-phase: `parse` turns text into a [`ModelDefinition`]
//! (pure syntax), `build` constructs the model and enforces dimension caps.
//! Structural inconsistencies (shape mismatches, unknown labels, a declared
//! unit that fails the unit equations) are *input* errors; properties under
//! test (axioms, gradings, strictness, cover conditions) are never checked
//! at load time.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use abelian_models::{build_truncated_abelian, TruncatedAbelianModel};
use coalgebra_engine::{Coalgebra, CoalgError, GradedSpace, TensorCap, UnitElement};
use exact_linear::{Matrix, Rat, Vector};
use hk_models::{build_fano, build_hilb, build_k3, FanoModel, HilbModel, K3Model, ModelError};
use incidence_transport::{Cover, FiniteVariety, IncidenceError};

use crate::CliError;

pub const HEADER: &str = "corad-model v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietySpec {
    pub points: Vec<String>,
    /// Each relation is a list of (point label, coefficient) pairs; the
    /// coefficients of a rational equivalence must sum to zero.
    pub relations: Vec<Vec<(String, Rat)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSpec {
    pub gamma: String,
    pub source: String,
    pub target: String,
    /// (gamma point, image point, multiplicity), one line per gamma point.
    pub phi: Vec<(String, String, u64)>,
    pub psi: Vec<(String, String, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSpec {
    /// (grade, label) per basis vector, grades non-descending.
    pub grades: Vec<(usize, String)>,
    pub comult: Vec<(usize, usize, Rat)>,
    pub counit: Vec<(usize, usize, Rat)>,
    pub unit: Vec<(usize, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelDefinition {
    K3 { t: usize },
    Hilb { n: usize, t: usize },
    Fano { lines: usize, triangles: Vec<[usize; 3]> },
    AbelianTrunc { g: usize, s: usize, points: Vec<Vec<i64>> },
    AbelianLazy { rank: usize, points: Vec<Vec<i64>>, kmax: usize },
    Incidence { varieties: Vec<(String, VarietySpec)>, covers: Vec<(String, CoverSpec)> },
    Raw(RawSpec),
}

impl ModelDefinition {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ModelDefinition::K3 { .. } => "k3",
            ModelDefinition::Hilb { .. } => "hilb",
            ModelDefinition::Fano { .. } => "fano",
            ModelDefinition::AbelianTrunc { .. } => "abelian-trunc",
            ModelDefinition::AbelianLazy { .. } => "abelian-lazy",
            ModelDefinition::Incidence { .. } => "incidence",
            ModelDefinition::Raw(_) => "raw-coalgebra",
        }
    }
}

/// A fully constructed model, ready for the command layer.
pub enum LoadedModel {
    K3(K3Model),
    Hilb(HilbModel),
    Fano(FanoModel),
    AbelianTrunc { model: TruncatedAbelianModel, points: Vec<Vec<i64>> },
    AbelianLazy { rank: usize, points: Vec<Vec<i64>>, kmax: usize },
    Incidence { covers: Vec<(String, Cover)> },
    Raw { coalg: Coalgebra, unit: UnitElement },
}

impl LoadedModel {
    pub fn kind_name(&self) -> &'static str {
        match self {
            LoadedModel::K3(_) => "k3",
            LoadedModel::Hilb(_) => "hilb",
            LoadedModel::Fano(_) => "fano",
            LoadedModel::AbelianTrunc { .. } => "abelian-trunc",
            LoadedModel::AbelianLazy { .. } => "abelian-lazy",
            LoadedModel::Incidence { .. } => "incidence",
            LoadedModel::Raw { .. } => "raw-coalgebra",
        }
    }

    /// Scalar parameters echoed in report headers, in a fixed order.
    pub fn params(&self) -> Vec<(String, String)> {
        match self {
            LoadedModel::K3(m) => vec![("t".into(), m.t.to_string())],
            LoadedModel::Hilb(m) => {
                vec![("n".into(), m.n.to_string()), ("t".into(), m.t.to_string())]
            }
            LoadedModel::Fano(m) => vec![
                ("lines".into(), m.lines.to_string()),
                ("triangles".into(), m.triangles.len().to_string()),
            ],
            LoadedModel::AbelianTrunc { model, points } => vec![
                ("g".into(), model.g.to_string()),
                ("s".into(), model.s.to_string()),
                ("points".into(), points.len().to_string()),
            ],
            LoadedModel::AbelianLazy { rank, points, kmax } => vec![
                ("rank".into(), rank.to_string()),
                ("points".into(), points.len().to_string()),
                ("kmax".into(), kmax.to_string()),
            ],
            LoadedModel::Incidence { covers } => {
                vec![("covers".into(), covers.len().to_string())]
            }
            LoadedModel::Raw { coalg, .. } => {
                vec![("dim".into(), coalg.dim().to_string())]
            }
        }
    }

    /// The coalgebra-and-unit pair for matrix-backed kinds.
    pub fn graded(&self) -> Option<(&Coalgebra, &UnitElement)> {
        match self {
            LoadedModel::K3(m) => Some((&m.coalg, &m.unit)),
            LoadedModel::Hilb(m) => Some((&m.coalg, &m.unit)),
            LoadedModel::Fano(m) => Some((&m.coalg, &m.unit)),
            LoadedModel::AbelianTrunc { model, .. } => Some((&model.coalg, &model.unit)),
            LoadedModel::Raw { coalg, unit } => Some((coalg, unit)),
            _ => None,
        }
    }

    /// Natural filtration depth for the kind: the top grade of the model.
    pub fn default_kmax(&self) -> Option<usize> {
        self.graded().map(|(c, _)| c.space().top_grade())
    }
}

fn err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { line: line.into(), msg: msg.into() }
}

fn parse_num<T: FromStr>(line: usize, tok: &str, what: &str) -> Result<T, CliError> {
    tok.parse::<T>().map_err(|_| err(line, format!("expected {what}, got {tok:?}")))
}

fn parse_rat(line: usize, tok: &str) -> Result<Rat, CliError> {
    Rat::from_str(tok).map_err(|e| err(line, format!("bad rational {tok:?}: {e}")))
}

/// One meaningful line: the 1-based line number and its trimmed text.
type Line = (usize, String);

fn meaningful_lines(text: &str) -> Vec<Line> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let t = body.trim();
            if t.is_empty() {
                None
            } else {
                Some((i + 1, t.to_string()))
            }
        })
        .collect()
}

/// Splits `key = value` and returns (key, value) or None if there is no `=`.
fn key_value(s: &str) -> Option<(&str, &str)> {
    s.split_once('=').map(|(k, v)| (k.trim(), v.trim()))
}

pub fn parse(text: &str) -> Result<ModelDefinition, CliError> {
    let lines = meaningful_lines(text);
    if lines.is_empty() {
        return Err(err(1, format!("empty file; expected header {HEADER:?}")));
    }
    if lines[0].1 != HEADER {
        return Err(err(lines[0].0, format!("expected header {HEADER:?}, got {:?}", lines[0].1)));
    }
    let Some(kind_line) = lines.get(1) else {
        return Err(err(lines[0].0, "missing `kind <tag>` line"));
    };
    let mut kind_toks = kind_line.1.split_whitespace();
    if kind_toks.next() != Some("kind") {
        return Err(err(kind_line.0, "expected `kind <tag>` after the header"));
    }
    let Some(tag) = kind_toks.next() else {
        return Err(err(kind_line.0, "missing kind tag"));
    };
    if kind_toks.next().is_some() {
        return Err(err(kind_line.0, "trailing tokens after the kind tag"));
    }
    let body = &lines[2..];
    match tag {
        "k3" => parse_k3(body),
        "hilb" => parse_hilb(body),
        "fano" => parse_fano(body),
        "abelian-trunc" => parse_abelian_trunc(body),
        "abelian-lazy" => parse_abelian_lazy(body),
        "incidence" => parse_incidence(body),
        "raw-coalgebra" => parse_raw(body),
        other => Err(err(
            kind_line.0,
            format!(
                "unknown kind {other:?}; expected one of k3, hilb, fano, abelian-trunc, \
                 abelian-lazy, incidence, raw-coalgebra"
            ),
        )),
    }
}

/// Collects `key = value` scalar lines, erroring on anything else.
fn scalars(body: &[Line]) -> Result<Vec<(usize, String, String)>, CliError> {
    body.iter()
        .map(|(n, s)| match key_value(s) {
            Some((k, v)) if !k.is_empty() && !v.is_empty() => {
                Ok((*n, k.to_string(), v.to_string()))
            }
            _ => Err(err(*n, format!("expected `key = value`, got {s:?}"))),
        })
        .collect()
}

fn take_unique(
    entries: &[(usize, String, String)],
    key: &str,
    last_line: usize,
) -> Result<(usize, String), CliError> {
    let mut found = None;
    for (n, k, v) in entries {
        if k == key {
            if found.is_some() {
                return Err(err(*n, format!("duplicate `{key}`")));
            }
            found = Some((*n, v.clone()));
        }
    }
    found.ok_or_else(|| err(last_line, format!("missing required `{key} = ...`")))
}

fn reject_unknown(
    entries: &[(usize, String, String)],
    allowed: &[&str],
) -> Result<(), CliError> {
    for (n, k, _) in entries {
        if !allowed.contains(&k.as_str()) {
            return Err(err(*n, format!("unknown key {k:?}; allowed: {}", allowed.join(", "))));
        }
    }
    Ok(())
}

fn last_line(body: &[Line]) -> usize {
    body.last().map(|(n, _)| *n).unwrap_or(2)
}

fn parse_k3(body: &[Line]) -> Result<ModelDefinition, CliError> {
    let entries = scalars(body)?;
    reject_unknown(&entries, &["t"])?;
    let (n, v) = take_unique(&entries, "t", last_line(body))?;
    Ok(ModelDefinition::K3 { t: parse_num(n, &v, "a positive integer")? })
}

fn parse_hilb(body: &[Line]) -> Result<ModelDefinition, CliError> {
    let entries = scalars(body)?;
    reject_unknown(&entries, &["n", "t"])?;
    let (ln, v) = take_unique(&entries, "n", last_line(body))?;
    let n = parse_num(ln, &v, "a positive integer")?;
    let (lt, v) = take_unique(&entries, "t", last_line(body))?;
    let t = parse_num(lt, &v, "a positive integer")?;
    Ok(ModelDefinition::Hilb { n, t })
}

fn parse_fano(body: &[Line]) -> Result<ModelDefinition, CliError> {
    let entries = scalars(body)?;
    reject_unknown(&entries, &["lines", "triangle"])?;
    let (ln, v) = take_unique(&entries, "lines", last_line(body))?;
    let lines: usize = parse_num(ln, &v, "a positive integer")?;
    let mut triangles = Vec::new();
    for (n, k, v) in &entries {
        if k == "triangle" {
            let idx: Vec<usize> = v
                .split_whitespace()
                .map(|t| parse_num(*n, t, "a 1-based line index"))
                .collect::<Result<_, _>>()?;
            if idx.len() != 3 {
                return Err(err(*n, format!("a triangle needs 3 line indices, got {}", idx.len())));
            }
            for &i in &idx {
                if i == 0 || i > lines {
                    return Err(err(*n, format!("line index {i} out of range 1..={lines}")));
                }
            }
            triangles.push([idx[0] - 1, idx[1] - 1, idx[2] - 1]);
        }
    }
    if triangles.is_empty() {
        return Err(err(last_line(body), "a fano model needs at least one `triangle = i j k`"));
    }
    Ok(ModelDefinition::Fano { lines, triangles })
}

fn parse_point_list(
    entries: &[(usize, String, String)],
    width: usize,
    what: &str,
) -> Result<Vec<Vec<i64>>, CliError> {
    let mut points = Vec::new();
    for (n, k, v) in entries {
        if k == "point" {
            let coords: Vec<i64> = v
                .split_whitespace()
                .map(|t| parse_num(*n, t, "an integer"))
                .collect::<Result<_, _>>()?;
            if coords.len() != width {
                return Err(err(*n, format!("{what} needs {width} coordinates, got {}", coords.len())));
            }
            points.push(coords);
        }
    }
    Ok(points)
}

fn parse_abelian_trunc(body: &[Line]) -> Result<ModelDefinition, CliError> {
    let entries = scalars(body)?;
    reject_unknown(&entries, &["g", "s", "point"])?;
    let (lg, v) = take_unique(&entries, "g", last_line(body))?;
    let g = parse_num(lg, &v, "a positive integer")?;
    let (ls, v) = take_unique(&entries, "s", last_line(body))?;
    let s: usize = parse_num(ls, &v, "a positive integer")?;
    let mut points = parse_point_list(&entries, s, "a log-coefficient point")?;
    if points.is_empty() {
        // Default sample points: the s standard generators.
        for i in 0..s {
            let mut c = vec![0i64; s];
            c[i] = 1;
            points.push(c);
        }
    }
    Ok(ModelDefinition::AbelianTrunc { g, s, points })
}

fn parse_abelian_lazy(body: &[Line]) -> Result<ModelDefinition, CliError> {
    let entries = scalars(body)?;
    reject_unknown(&entries, &["rank", "point", "kmax"])?;
    let (lr, v) = take_unique(&entries, "rank", last_line(body))?;
    let rank: usize = parse_num(lr, &v, "a positive integer")?;
    if rank == 0 {
        return Err(err(lr, "rank must be at least 1"));
    }
    let mut points = parse_point_list(&entries, rank, "a lattice point")?;
    if points.is_empty() {
        for i in 0..rank {
            let mut c = vec![0i64; rank];
            c[i] = 1;
            points.push(c);
        }
    }
    let kmax = match entries.iter().find(|(_, k, _)| k == "kmax") {
        Some((n, _, v)) => parse_num(*n, v, "a non-negative integer")?,
        None => 4,
    };
    Ok(ModelDefinition::AbelianLazy { rank, points, kmax })
}

/// Section-structured bodies: `[header]` lines open a section that runs to
/// the next header. Returns (header line number, header text, body lines).
fn sections(body: &[Line]) -> Result<Vec<(usize, String, Vec<Line>)>, CliError> {
    let mut out: Vec<(usize, String, Vec<Line>)> = Vec::new();
    for (n, s) in body {
        if let Some(inner) = s.strip_prefix('[') {
            let Some(name) = inner.strip_suffix(']') else {
                return Err(err(*n, format!("unterminated section header {s:?}")));
            };
            out.push((*n, name.trim().to_string(), Vec::new()));
        } else if let Some(last) = out.last_mut() {
            last.2.push((*n, s.clone()));
        } else {
            return Err(err(*n, format!("expected a `[section]` header before {s:?}")));
        }
    }
    Ok(out)
}

fn parse_raw(body: &[Line]) -> Result<ModelDefinition, CliError> {
    let mut grades = Vec::new();
    let mut comult = Vec::new();
    let mut counit = Vec::new();
    let mut unit = Vec::new();
    let mut seen = Vec::new();
    for (hn, name, section_body) in sections(body)? {
        if seen.contains(&name) {
            return Err(err(hn, format!("duplicate section [{name}]")));
        }
        seen.push(name.clone());
        match name.as_str() {
            "space" => {
                for (n, s) in &section_body {
                    let toks: Vec<&str> = s.split_whitespace().collect();
                    if toks.len() != 3 || toks[0] != "grade" {
                        return Err(err(*n, format!("expected `grade <k> <label>`, got {s:?}")));
                    }
                    let k = parse_num(*n, toks[1], "a grade")?;
                    if let Some(&(prev, _)) = grades.last() {
                        if k < prev {
                            return Err(err(*n, "grades must be listed in non-descending order"));
                        }
                    }
                    grades.push((k, toks[2].to_string()));
                }
            }
            "comult" | "counit" => {
                for (n, s) in &section_body {
                    let toks: Vec<&str> = s.split_whitespace().collect();
                    if toks.len() != 3 {
                        return Err(err(*n, format!("expected `row col value`, got {s:?}")));
                    }
                    let r = parse_num(*n, toks[0], "a row index")?;
                    let c = parse_num(*n, toks[1], "a column index")?;
                    let x = parse_rat(*n, toks[2])?;
                    if name == "comult" {
                        comult.push((r, c, x));
                    } else {
                        counit.push((r, c, x));
                    }
                }
            }
            "unit" => {
                for (n, s) in &section_body {
                    let toks: Vec<&str> = s.split_whitespace().collect();
                    if toks.len() != 2 {
                        return Err(err(*n, format!("expected `index value`, got {s:?}")));
                    }
                    unit.push((parse_num(*n, toks[0], "an index")?, parse_rat(*n, toks[1])?));
                }
            }
            other => return Err(err(hn, format!("unknown section [{other}]"))),
        }
    }
    let tail = last_line(body);
    if grades.is_empty() {
        return Err(err(tail, "missing [space] section with `grade <k> <label>` lines"));
    }
    if counit.is_empty() {
        return Err(err(tail, "missing [counit] section"));
    }
    if unit.is_empty() {
        return Err(err(tail, "missing [unit] section"));
    }
    Ok(ModelDefinition::Raw(RawSpec { grades, comult, counit, unit }))
}

fn parse_incidence(body: &[Line]) -> Result<ModelDefinition, CliError> {
    let mut varieties: Vec<(String, VarietySpec)> = Vec::new();
    let mut covers: Vec<(String, CoverSpec)> = Vec::new();
    for (hn, header, section_body) in sections(body)? {
        let toks: Vec<&str> = header.split_whitespace().collect();
        match toks.as_slice() {
            ["variety", name] => {
                if varieties.iter().any(|(n, _)| n == name) {
                    return Err(err(hn, format!("duplicate variety {name:?}")));
                }
                varieties.push((name.to_string(), parse_variety(&section_body)?));
            }
            ["cover", name] => {
                if covers.iter().any(|(n, _)| n == name) {
                    return Err(err(hn, format!("duplicate cover {name:?}")));
                }
                covers.push((name.to_string(), parse_cover(hn, &section_body)?));
            }
            _ => {
                return Err(err(
                    hn,
                    format!("expected `[variety <name>]` or `[cover <name>]`, got [{header}]"),
                ))
            }
        }
    }
    if covers.is_empty() {
        return Err(err(last_line(body), "an incidence model needs at least one [cover]"));
    }
    Ok(ModelDefinition::Incidence { varieties, covers })
}

fn parse_variety(body: &[Line]) -> Result<VarietySpec, CliError> {
    let mut points = Vec::new();
    let mut relations = Vec::new();
    for (n, s) in body {
        let toks: Vec<&str> = s.split_whitespace().collect();
        match toks.first().copied() {
            Some("points") => {
                points.extend(toks[1..].iter().map(|t| t.to_string()));
            }
            Some("point") if toks.len() == 2 => points.push(toks[1].to_string()),
            Some("relation") => {
                if toks.len() < 3 || toks.len() % 2 == 0 {
                    return Err(err(
                        *n,
                        "expected `relation <coeff> <point> [<coeff> <point> ...]`",
                    ));
                }
                let mut terms = Vec::new();
                for pair in toks[1..].chunks(2) {
                    terms.push((pair[1].to_string(), parse_rat(*n, pair[0])?));
                }
                relations.push(terms);
            }
            _ => return Err(err(*n, format!("expected `points ...` or `relation ...`, got {s:?}"))),
        }
    }
    Ok(VarietySpec { points, relations })
}

fn parse_cover(header_line: usize, body: &[Line]) -> Result<CoverSpec, CliError> {
    let mut gamma = None;
    let mut source = None;
    let mut target = None;
    let mut phi = Vec::new();
    let mut psi = Vec::new();
    for (n, s) in body {
        if let Some((k, v)) = key_value(s) {
            let slot = match k {
                "gamma" => &mut gamma,
                "source" => &mut source,
                "target" => &mut target,
                _ => return Err(err(*n, format!("unknown cover key {k:?}"))),
            };
            if slot.is_some() {
                return Err(err(*n, format!("duplicate `{k}`")));
            }
            *slot = Some(v.to_string());
            continue;
        }
        let toks: Vec<&str> = s.split_whitespace().collect();
        match toks.as_slice() {
            ["phi", g, x, m] => phi.push((
                g.to_string(),
                x.to_string(),
                parse_num::<u64>(*n, m, "a positive multiplicity")?,
            )),
            ["psi", g, y, m] => psi.push((
                g.to_string(),
                y.to_string(),
                parse_num::<u64>(*n, m, "a positive multiplicity")?,
            )),
            _ => {
                return Err(err(
                    *n,
                    format!("expected `phi <g> <x> <mult>` or `psi <g> <y> <mult>`, got {s:?}"),
                ))
            }
        }
    }
    let need = |o: Option<String>, k: &str| {
        o.ok_or_else(|| err(header_line, format!("cover missing `{k} = <variety>`")))
    };
    Ok(CoverSpec {
        gamma: need(gamma, "gamma")?,
        source: need(source, "source")?,
        target: need(target, "target")?,
        phi,
        psi,
    })
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn model_err(e: ModelError) -> CliError {
    match e {
        ModelError::Coalg(CoalgError::TensorCapExceeded { needed, cap }) => {
            CliError::Cap(format!("operation needs {needed} entries, cap is {cap}"))
        }
        other => input(other.to_string()),
    }
}

fn incidence_err(e: IncidenceError) -> CliError {
    match e {
        IncidenceError::Coalg(CoalgError::TensorCapExceeded { needed, cap }) => {
            CliError::Cap(format!("operation needs {needed} entries, cap is {cap}"))
        }
        IncidenceError::ProductTooLarge { needed, cap } => {
            CliError::Cap(format!("product variety needs {needed} points, cap is {cap}"))
        }
        other => input(other.to_string()),
    }
}

/// Comultiplication-shaped materialization for a matrix-backed model of
/// dimension d: the load-time dimension cap.
fn admit_model(cap: TensorCap, d: usize) -> Result<(), CliError> {
    cap.admit(d * d, d).map_err(|e| match e {
        CoalgError::TensorCapExceeded { needed, cap } => {
            CliError::Cap(format!("model of dimension {d} needs {needed} entries, cap is {cap}"))
        }
        other => input(other.to_string()),
    })
}

pub fn build(def: &ModelDefinition, cap: TensorCap) -> Result<LoadedModel, CliError> {
    match def {
        ModelDefinition::K3 { t } => {
            let m = build_k3(*t).map_err(model_err)?;
            admit_model(cap, m.coalg.dim())?;
            Ok(LoadedModel::K3(m))
        }
        ModelDefinition::Hilb { n, t } => {
            let m = build_hilb(*n, *t).map_err(model_err)?;
            admit_model(cap, m.coalg.dim())?;
            Ok(LoadedModel::Hilb(m))
        }
        ModelDefinition::Fano { lines, triangles } => {
            let m = build_fano(*lines, triangles).map_err(model_err)?;
            admit_model(cap, m.coalg.dim())?;
            Ok(LoadedModel::Fano(m))
        }
        ModelDefinition::AbelianTrunc { g, s, points } => {
            let model =
                build_truncated_abelian(*g, *s).map_err(|e| input(e.to_string()))?;
            admit_model(cap, model.coalg.dim())?;
            Ok(LoadedModel::AbelianTrunc { model, points: points.clone() })
        }
        ModelDefinition::AbelianLazy { rank, points, kmax } => {
            Ok(LoadedModel::AbelianLazy { rank: *rank, points: points.clone(), kmax: *kmax })
        }
        ModelDefinition::Incidence { varieties, covers } => {
            build_incidence(varieties, covers)
        }
        ModelDefinition::Raw(spec) => {
            let m = build_raw(spec, cap)?;
            Ok(m)
        }
    }
}

fn build_raw(spec: &RawSpec, cap: TensorCap) -> Result<LoadedModel, CliError> {
    let d = spec.grades.len();
    admit_model(cap, d)?;
    let mut blocks: Vec<(usize, Vec<String>)> = Vec::new();
    for (k, label) in &spec.grades {
        match blocks.last_mut() {
            Some((g, labels)) if g == k => labels.push(label.clone()),
            _ => blocks.push((*k, vec![label.clone()])),
        }
    }
    let space = GradedSpace::new(blocks).map_err(|e| input(e.to_string()))?;
    let comult = triples_to_matrix(d * d, d, &spec.comult, "comult")?;
    let counit = triples_to_matrix(1, d, &spec.counit, "counit")?;
    let coalg = Coalgebra::new(space, comult, counit).map_err(|e| input(e.to_string()))?;
    let mut v = Vector::zero(d);
    for (i, x) in &spec.unit {
        if *i >= d {
            return Err(input(format!("unit index {i} out of range for dimension {d}")));
        }
        if !v.get(*i).is_zero() {
            return Err(input(format!("duplicate unit entry at index {i}")));
        }
        v.set(*i, x.clone());
    }
    let unit = UnitElement::validated(&coalg, v)
        .map_err(|e| input(format!("declared unit fails the unit equations: {e}")))?;
    Ok(LoadedModel::Raw { coalg, unit })
}

fn triples_to_matrix(
    rows: usize,
    cols: usize,
    triples: &[(usize, usize, Rat)],
    what: &str,
) -> Result<Matrix, CliError> {
    let mut m = Matrix::zeros(rows, cols);
    for (r, c, x) in triples {
        if *r >= rows || *c >= cols {
            return Err(input(format!(
                "{what} entry ({r}, {c}) out of range for a {rows}x{cols} matrix"
            )));
        }
        if !m.get(*r, *c).is_zero() {
            return Err(input(format!("duplicate {what} entry at ({r}, {c})")));
        }
        m.set(*r, *c, x.clone());
    }
    Ok(m)
}

fn build_incidence(
    varieties: &[(String, VarietySpec)],
    covers: &[(String, CoverSpec)],
) -> Result<LoadedModel, CliError> {
    let mut built: BTreeMap<&str, FiniteVariety> = BTreeMap::new();
    for (name, spec) in varieties {
        let index: BTreeMap<&str, usize> =
            spec.points.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        if index.len() != spec.points.len() {
            return Err(input(format!("variety {name:?} repeats a point label")));
        }
        let mut relations = Vec::new();
        for terms in &spec.relations {
            let mut v = Vector::zero(spec.points.len());
            for (label, coeff) in terms {
                let Some(&i) = index.get(label.as_str()) else {
                    return Err(input(format!(
                        "variety {name:?}: relation names unknown point {label:?}"
                    )));
                };
                v.add_to(i, coeff);
            }
            relations.push(v);
        }
        let fv = FiniteVariety::new(spec.points.clone(), &relations)
            .map_err(|e| input(format!("variety {name:?}: {e}")))?;
        built.insert(name.as_str(), fv);
    }

    let mut out = Vec::new();
    for (name, spec) in covers {
        let resolve = |vn: &str| {
            built
                .get(vn)
                .cloned()
                .ok_or_else(|| input(format!("cover {name:?} references unknown variety {vn:?}")))
        };
        let gamma = resolve(&spec.gamma)?;
        let source = resolve(&spec.source)?;
        let target = resolve(&spec.target)?;
        let phi = resolve_map(name, "phi", &gamma, &source, &spec.phi)?;
        let psi = resolve_map(name, "psi", &gamma, &target, &spec.psi)?;
        let cover =
            Cover::new(gamma, source, target, phi, psi).map_err(incidence_err)?;
        out.push((name.clone(), cover));
    }
    Ok(LoadedModel::Incidence { covers: out })
}

/// Turns `map <gamma-label> <image-label> <mult>` lines into the per-gamma
/// index list the cover constructor expects: exactly one entry per gamma
/// point, in gamma order.
fn resolve_map(
    cover: &str,
    map: &str,
    gamma: &FiniteVariety,
    onto: &FiniteVariety,
    lines: &[(String, String, u64)],
) -> Result<Vec<(usize, u64)>, CliError> {
    let mut per_point: Vec<Option<(usize, u64)>> = vec![None; gamma.point_count()];
    for (g, image, mult) in lines {
        let Some(gi) = gamma.point_index(g) else {
            return Err(input(format!("cover {cover:?}: {map} names unknown gamma point {g:?}")));
        };
        let Some(oi) = onto.point_index(image) else {
            return Err(input(format!("cover {cover:?}: {map} names unknown image point {image:?}")));
        };
        if per_point[gi].is_some() {
            return Err(input(format!("cover {cover:?}: {map} maps {g:?} twice")));
        }
        per_point[gi] = Some((oi, *mult));
    }
    per_point
        .into_iter()
        .enumerate()
        .map(|(i, slot)| {
            slot.ok_or_else(|| {
                input(format!(
                    "cover {cover:?}: {map} is missing gamma point {:?}",
                    gamma.points()[i]
                ))
            })
        })
        .collect()
}

pub fn load(path: &Path, cap: TensorCap) -> Result<LoadedModel, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    let def = parse(&text)?;
    build(&def, cap)
}
