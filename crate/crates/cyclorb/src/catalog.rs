//! Built-in example categories, the category file format, and spectrum
//! export.
//!
//! Category files are JSON with exact rational strings for twists and
//! central charge (never floats). Top-level keys: `name`, `labels`,
//! `unit`, `fusion`, `twists`, `central_charge`, optional `conjugates`.
//! Fusion is sparse: `"a*b"` maps to `{label: multiplicity}`; an entry
//! given in one order is mirrored to the other, and if both orders are
//! present they must agree. Unknown top-level keys produce warnings, not
//! errors.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fusion::FusionRing;
use crate::modular::ModularData;
use crate::orbifold::{OrbifoldSector, SectorKind};
use crate::rational::{format_rational, parse_mod1, parse_rational, Rational, RationalMod1};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("[E_PARSE] json syntax error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("[E_SCHEMA] {location}: {message}")]
    Schema { location: String, message: String },
    #[error("[E_INVARIANT] {location}: {message}")]
    Invariant { location: String, message: String },
    #[error("[E_IO] {0}")]
    Io(#[from] std::io::Error),
    #[error("[E_UNKNOWN] unknown builtin '{name}'; available: {}", available.join(", "))]
    UnknownBuiltin {
        name: String,
        available: Vec<String>,
    },
}

impl CatalogError {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            CatalogError::Parse { .. } => "E_PARSE",
            CatalogError::Schema { .. } => "E_SCHEMA",
            CatalogError::Invariant { .. } => "E_INVARIANT",
            CatalogError::Io(_) => "E_IO",
            CatalogError::UnknownBuiltin { .. } => "E_UNKNOWN",
        }
    }
}

fn schema(location: impl Into<String>, message: impl Into<String>) -> CatalogError {
    CatalogError::Schema {
        location: location.into(),
        message: message.into(),
    }
}

fn invariant(location: impl Into<String>, message: impl Into<String>) -> CatalogError {
    CatalogError::Invariant {
        location: location.into(),
        message: message.into(),
    }
}

/// File image of a category, kept close to the on-disk JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CategorySpec {
    pub name: String,
    pub labels: Vec<String>,
    pub unit: String,
    pub fusion: BTreeMap<String, BTreeMap<String, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugates: Option<BTreeMap<String, String>>,
    pub twists: BTreeMap<String, String>,
    pub central_charge: String,
}

impl CategorySpec {
    /// Pretty JSON text of this spec (deterministic: all maps are ordered).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("category spec serializes")
    }

    /// Build validated modular data from the file image.
    pub fn to_modular(&self) -> Result<ModularData, CatalogError> {
        let m = self.labels.len();
        if m == 0 {
            return Err(schema("labels", "label list is empty"));
        }
        let mut index = BTreeMap::new();
        for (i, l) in self.labels.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return Err(schema("labels", format!("duplicate label '{l}'")));
            }
        }
        let unit_index = *index
            .get(self.unit.as_str())
            .ok_or_else(|| schema("unit", format!("unit '{}' is not a label", self.unit)))?;
        if unit_index != 0 {
            return Err(invariant(
                "unit",
                format!("unit '{}' must be the first label", self.unit),
            ));
        }

        // dense tensor from the sparse map, mirroring single-direction keys
        let mut tensor = vec![vec![vec![None::<u64>; m]; m]; m];
        for (key, products) in &self.fusion {
            let (la, lb) = key
                .split_once('*')
                .ok_or_else(|| schema(format!("fusion[{key}]"), "key must look like 'a*b'"))?;
            let a = *index.get(la.trim()).ok_or_else(|| {
                schema(format!("fusion[{key}]"), format!("unknown label '{la}'"))
            })?;
            let b = *index.get(lb.trim()).ok_or_else(|| {
                schema(format!("fusion[{key}]"), format!("unknown label '{lb}'"))
            })?;
            for (lc, &mult) in products {
                let c = *index.get(lc.as_str()).ok_or_else(|| {
                    schema(format!("fusion[{key}]"), format!("unknown label '{lc}'"))
                })?;
                if mult == 0 {
                    return Err(schema(
                        format!("fusion[{key}]"),
                        format!("multiplicity of '{lc}' must be positive (omit zero entries)"),
                    ));
                }
                for (x, y) in [(a, b), (b, a)] {
                    match tensor[x][y][c] {
                        None => tensor[x][y][c] = Some(mult),
                        Some(prev) if prev == mult => {}
                        Some(prev) => {
                            return Err(schema(
                                format!("fusion[{key}]"),
                                format!(
                                    "conflicts with the mirrored entry: '{lc}' has \
                                     multiplicity {mult} here but {prev} elsewhere"
                                ),
                            ))
                        }
                    }
                }
            }
        }
        let dense: Vec<Vec<Vec<u64>>> = tensor
            .into_iter()
            .map(|p| {
                p.into_iter()
                    .map(|r| r.into_iter().map(|v| v.unwrap_or(0)).collect())
                    .collect()
            })
            .collect();

        let conj: Vec<usize> = match &self.conjugates {
            Some(map) => {
                let mut conj = Vec::with_capacity(m);
                for l in &self.labels {
                    let target = map.get(l).ok_or_else(|| {
                        schema("conjugates", format!("missing conjugate for label '{l}'"))
                    })?;
                    conj.push(*index.get(target.as_str()).ok_or_else(|| {
                        schema("conjugates", format!("unknown label '{target}'"))
                    })?);
                }
                for key in map.keys() {
                    if !index.contains_key(key.as_str()) {
                        return Err(schema(
                            "conjugates",
                            format!("unknown label '{key}'"),
                        ));
                    }
                }
                conj
            }
            None => {
                // infer from N[a][b][unit] = 1
                let mut conj = Vec::with_capacity(m);
                for a in 0..m {
                    let partners: Vec<usize> =
                        (0..m).filter(|&b| dense[a][b][0] > 0).collect();
                    match partners.as_slice() {
                        [b] => conj.push(*b),
                        [] => {
                            return Err(invariant(
                                format!("fusion (label '{}')", self.labels[a]),
                                "no conjugate: the unit never appears in its products",
                            ))
                        }
                        _ => {
                            return Err(invariant(
                                format!("fusion (label '{}')", self.labels[a]),
                                "conjugate is not unique",
                            ))
                        }
                    }
                }
                conj
            }
        };

        let mut twists = Vec::with_capacity(m);
        for l in &self.labels {
            let raw = self.twists.get(l).ok_or_else(|| {
                schema("twists", format!("missing twist for label '{l}'"))
            })?;
            let h = parse_mod1(raw).ok_or_else(|| {
                schema(
                    format!("twists[{l}]"),
                    format!("'{raw}' is not a rational (expected p or p/q)"),
                )
            })?;
            twists.push(h);
        }
        let charge = parse_rational(&self.central_charge).ok_or_else(|| {
            schema(
                "central_charge",
                format!("'{}' is not a rational", self.central_charge),
            )
        })?;

        let ring = FusionRing::new(self.labels.clone(), dense, conj)
            .map_err(|e| schema("fusion", e.to_string()))?;
        let report = ring.validate();
        if !report.is_valid() {
            let summary: Vec<String> = report
                .failures()
                .map(|c| format!("{} ({} violations)", c.name, c.violations.len()))
                .collect();
            return Err(invariant("fusion", summary.join("; ")));
        }
        ModularData::new(self.name.clone(), ring, twists, charge)
            .map_err(|e| invariant("twists", e.to_string()))
    }
}

/// Parse a category file into its image, collecting warnings for unknown
/// top-level keys.
pub fn parse_spec(text: &str) -> Result<(CategorySpec, Vec<String>), CatalogError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CatalogError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
    let obj = value
        .as_object()
        .ok_or_else(|| schema("<top>", "expected a JSON object"))?;

    const KNOWN: [&str; 7] = [
        "name",
        "labels",
        "unit",
        "fusion",
        "twists",
        "central_charge",
        "conjugates",
    ];
    let mut warnings = Vec::new();
    for key in obj.keys() {
        if !KNOWN.contains(&key.as_str()) {
            warnings.push(format!("ignoring unknown key '{key}'"));
        }
    }

    let field = |name: &str| -> Result<&serde_json::Value, CatalogError> {
        obj.get(name)
            .ok_or_else(|| schema(name, "missing required key"))
    };
    let as_str = |name: &str, v: &serde_json::Value| -> Result<String, CatalogError> {
        v.as_str()
            .map(str::to_owned)
            .ok_or_else(|| schema(name, "expected a string"))
    };

    let name = as_str("name", field("name")?)?;
    let labels = field("labels")?
        .as_array()
        .ok_or_else(|| schema("labels", "expected an array of strings"))?
        .iter()
        .enumerate()
        .map(|(i, v)| as_str(&format!("labels[{i}]"), v))
        .collect::<Result<Vec<_>, _>>()?;
    let unit = as_str("unit", field("unit")?)?;

    let mut fusion = BTreeMap::new();
    for (key, v) in field("fusion")?
        .as_object()
        .ok_or_else(|| schema("fusion", "expected an object"))?
    {
        let mut products = BTreeMap::new();
        for (label, mult) in v.as_object().ok_or_else(|| {
            schema(format!("fusion[{key}]"), "expected an object {label: multiplicity}")
        })? {
            let mult = mult.as_u64().ok_or_else(|| {
                schema(
                    format!("fusion[{key}][{label}]"),
                    "expected a positive integer",
                )
            })?;
            products.insert(label.clone(), mult);
        }
        fusion.insert(key.clone(), products);
    }

    let conjugates = match obj.get("conjugates") {
        None => None,
        Some(v) => {
            let mut map = BTreeMap::new();
            for (key, target) in v
                .as_object()
                .ok_or_else(|| schema("conjugates", "expected an object"))?
            {
                map.insert(key.clone(), as_str(&format!("conjugates[{key}]"), target)?);
            }
            Some(map)
        }
    };

    let mut twists = BTreeMap::new();
    for (key, v) in field("twists")?
        .as_object()
        .ok_or_else(|| schema("twists", "expected an object"))?
    {
        twists.insert(key.clone(), as_str(&format!("twists[{key}]"), v)?);
    }

    let central_charge = as_str("central_charge", field("central_charge")?)?;

    Ok((
        CategorySpec {
            name,
            labels,
            unit,
            fusion,
            conjugates,
            twists,
            central_charge,
        },
        warnings,
    ))
}

/// Parse and validate a category from JSON text.
pub fn load_category(text: &str) -> Result<(ModularData, Vec<String>), CatalogError> {
    let (spec, warnings) = parse_spec(text)?;
    Ok((spec.to_modular()?, warnings))
}

/// Parse and validate a category file.
pub fn load_category_file(path: &Path) -> Result<(ModularData, Vec<String>), CatalogError> {
    let text = std::fs::read_to_string(path)?;
    load_category(&text)
}

fn spec_from_tensor(
    name: &str,
    labels: &[&str],
    twists: &[&str],
    charge: &str,
    n: impl Fn(usize, usize, usize) -> u64,
) -> CategorySpec {
    let m = labels.len();
    let mut fusion = BTreeMap::new();
    for a in 0..m {
        for b in a..m {
            let mut products = BTreeMap::new();
            for c in 0..m {
                let mult = n(a, b, c);
                if mult > 0 {
                    products.insert(labels[c].to_owned(), mult);
                }
            }
            fusion.insert(format!("{}*{}", labels[a], labels[b]), products);
        }
    }
    CategorySpec {
        name: name.to_owned(),
        labels: labels.iter().map(|&l| l.to_owned()).collect(),
        unit: labels[0].to_owned(),
        fusion,
        conjugates: None,
        twists: labels
            .iter()
            .zip(twists)
            .map(|(&l, &h)| (l.to_owned(), h.to_owned()))
            .collect(),
        central_charge: charge.to_owned(),
    }
}

fn su2_spec(level: usize) -> CategorySpec {
    let labels: Vec<String> = (0..=level).map(|m| m.to_string()).collect();
    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let denom = 4 * (level as i64 + 2);
    let twists: Vec<String> = (0..=level as i64)
        .map(|m| {
            format_rational(&RationalMod1::new(m * (m + 2), denom).unwrap().as_ratio())
        })
        .collect();
    let twist_refs: Vec<&str> = twists.iter().map(String::as_str).collect();
    let charge = format_rational(&Rational::new(3 * level as i64, level as i64 + 2));
    let k = level;
    spec_from_tensor(
        &format!("SU2:{level}"),
        &label_refs,
        &twist_refs,
        &charge,
        move |a, b, c| {
            let lower = a.abs_diff(b);
            let upper = (a + b).min(2 * k - a - b);
            u64::from(c >= lower && c <= upper && (a + b + c) % 2 == 0)
        },
    )
}

/// File images of all built-in categories, keyed by catalog name.
pub fn builtin_specs() -> BTreeMap<String, CategorySpec> {
    let mut specs = BTreeMap::new();
    for c in ["0", "8", "24"] {
        specs.insert(
            format!("Trivial:{c}"),
            spec_from_tensor(&format!("Trivial:{c}"), &["1"], &["0"], c, |_, _, _| 1),
        );
    }
    specs.insert(
        "Ising".to_owned(),
        spec_from_tensor(
            "Ising",
            &["1", "eps", "sigma"],
            &["0", "1/2", "1/16"],
            "1/2",
            |a, b, c| {
                let table: [[&[usize]; 3]; 3] = [
                    [&[0], &[1], &[2]],
                    [&[1], &[0], &[2]],
                    [&[2], &[2], &[0, 1]],
                ];
                u64::from(table[a][b].contains(&c))
            },
        ),
    );
    specs.insert(
        "Fibonacci".to_owned(),
        spec_from_tensor(
            "Fibonacci",
            &["1", "tau"],
            &["0", "2/5"],
            "14/5",
            |a, b, c| match (a, b) {
                (0, _) => u64::from(b == c),
                (_, 0) => u64::from(a == c),
                (1, 1) => 1,
                _ => unreachable!(),
            },
        ),
    );
    specs.insert(
        "Semion".to_owned(),
        spec_from_tensor("Semion", &["1", "s"], &["0", "1/4"], "1", |a, b, c| {
            u64::from((a + b) % 2 == c)
        }),
    );
    specs.insert(
        "Z3".to_owned(),
        spec_from_tensor(
            "Z3",
            &["1", "w", "w2"],
            &["0", "1/3", "1/3"],
            "2",
            |a, b, c| u64::from((a + b) % 3 == c),
        ),
    );
    for level in 1..=4 {
        let spec = su2_spec(level);
        specs.insert(spec.name.clone(), spec);
    }
    specs
}

/// Names of the built-in categories, sorted.
pub fn list_builtin() -> Vec<String> {
    builtin_specs().into_keys().collect()
}

/// File image of one built-in category.
pub fn builtin_spec(name: &str) -> Result<CategorySpec, CatalogError> {
    builtin_specs()
        .remove(name)
        .ok_or_else(|| CatalogError::UnknownBuiltin {
            name: name.to_owned(),
            available: list_builtin(),
        })
}

/// Validated modular data of one built-in category.
pub fn builtin(name: &str) -> Result<ModularData, CatalogError> {
    builtin_spec(name)?.to_modular()
}

/// Output flavor for spectrum export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// Aligned plain-text table.
    Table,
    /// One JSON record per line.
    Records,
}

/// Line-oriented record form of one orbifold sector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub kind: String,
    pub sector: String,
    pub branch: String,
    pub dim: String,
    pub spin: String,
    pub grading: usize,
}

/// Format with 9 significant digits, plain decimal notation.
pub fn format_dim(value: f64) -> String {
    if value == 0.0 {
        return "0.00000000".to_owned();
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    format!("{value:.decimals$}")
}

fn tuple_names(md: &ModularData, tuple: &[usize]) -> String {
    let names: Vec<&str> = tuple.iter().map(|&l| md.ring().label(l)).collect();
    names.join(",")
}

fn sector_record(md: &ModularData, s: &OrbifoldSector) -> SpectrumRecord {
    let (kind, sector, branch) = match &s.kind {
        SectorKind::Untwisted { orbit, branch } => (
            "untwisted",
            format!("({})", tuple_names(md, &orbit.representative)),
            branch.to_string(),
        ),
        SectorKind::Twisted { label, branch } => (
            "twisted",
            md.ring().label(*label).to_owned(),
            branch.to_string(),
        ),
        SectorKind::TwistedConj { label, branch } => (
            "twisted-conj",
            md.ring().label(*label).to_owned(),
            branch.to_string(),
        ),
        SectorKind::HalfTwistedDiag { label, i, j } => (
            "half-diag",
            format!("({0},{0})", md.ring().label(*label)),
            format!("({i},{j})"),
        ),
        SectorKind::HalfTwistedPair { pair, i } => (
            "half-pair",
            format!(
                "{{{},{}}}",
                md.ring().label(pair.0),
                md.ring().label(pair.1)
            ),
            i.to_string(),
        ),
    };
    SpectrumRecord {
        kind: kind.to_owned(),
        sector,
        branch,
        dim: format_dim(s.dim),
        spin: s.spin.to_string(),
        grading: s.grading,
    }
}

fn sector_sort_key(s: &OrbifoldSector) -> (u8, Vec<usize>, Vec<usize>) {
    match &s.kind {
        SectorKind::Untwisted { orbit, branch } => {
            (0, orbit.representative.clone(), vec![*branch])
        }
        SectorKind::Twisted { label, branch } => (1, vec![*label], vec![*branch]),
        SectorKind::TwistedConj { label, branch } => (2, vec![*label], vec![*branch]),
        SectorKind::HalfTwistedDiag { label, i, j } => (3, vec![*label], vec![*i, *j]),
        SectorKind::HalfTwistedPair { pair, i } => (4, vec![pair.0, pair.1], vec![*i]),
    }
}

/// Render a spectrum deterministically, sorted by kind, then sector label,
/// then branch. Spins print as exact fractions, dimensions with 9
/// significant digits.
pub fn export_spectrum(
    md: &ModularData,
    sectors: &[OrbifoldSector],
    format: ExportFormat,
) -> String {
    let mut ordered: Vec<&OrbifoldSector> = sectors.iter().collect();
    ordered.sort_by_key(|s| sector_sort_key(s));
    let records: Vec<SpectrumRecord> = ordered.iter().map(|s| sector_record(md, s)).collect();
    match format {
        ExportFormat::Records => {
            let mut out = String::new();
            for r in &records {
                out.push_str(&serde_json::to_string(r).expect("record serializes"));
                out.push('\n');
            }
            out
        }
        ExportFormat::Table => {
            let header = ["kind", "sector", "branch", "dim", "spin", "grading"];
            let mut rows: Vec<[String; 6]> = Vec::with_capacity(records.len());
            for r in records {
                rows.push([
                    r.kind,
                    r.sector,
                    r.branch,
                    r.dim,
                    r.spin,
                    r.grading.to_string(),
                ]);
            }
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row.iter()) {
                    *w = (*w).max(cell.len());
                }
            }
            let mut out = String::new();
            let emit = |out: &mut String, cells: &[&str]| {
                let line: Vec<String> = cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| format!("{c:<width$}", width = widths[i]))
                    .collect();
                out.push_str(line.join("  ").trim_end());
                out.push('\n');
            };
            emit(&mut out, &header);
            for row in &rows {
                let cells: Vec<&str> = row.iter().map(String::as_str).collect();
                emit(&mut out, &cells);
            }
            out
        }
    }
}

/// Parse the `records` export format back into records.
pub fn parse_records(text: &str) -> Result<Vec<SpectrumRecord>, CatalogError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            serde_json::from_str(line).map_err(|e| CatalogError::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbifold::full_spectrum;

    #[test]
    fn builtin_list_is_stable() {
        let names = list_builtin();
        assert_eq!(
            names,
            vec![
                "Fibonacci", "Ising", "SU2:1", "SU2:2", "SU2:3", "SU2:4", "Semion", "Trivial:0",
                "Trivial:24", "Trivial:8", "Z3",
            ]
        );
    }

    #[test]
    fn unknown_builtin_lists_available() {
        match builtin("Nope") {
            Err(CatalogError::UnknownBuiltin { name, available }) => {
                assert_eq!(name, "Nope");
                assert_eq!(available, list_builtin());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn every_builtin_loads_and_validates() {
        for name in list_builtin() {
            let md = builtin(&name).unwrap();
            assert_eq!(md.name(), name);
            assert!(md.ring().validate().is_valid(), "{name}");
        }
    }

    #[test]
    fn builtin_values() {
        let ising = builtin("Ising").unwrap();
        assert!((ising.global_index() - 4.0).abs() < 1e-9);
        assert!(ising.is_modular().modular);
        assert!(ising.gauss_sum_check());

        let trivial = builtin("Trivial:0").unwrap();
        assert!((trivial.global_index() - 1.0).abs() < 1e-12);

        let su22 = builtin("SU2:2").unwrap();
        assert!((su22.global_index() - 4.0).abs() < 1e-9);
        let dims = su22.dims();
        assert!((dims[0] - 1.0).abs() < 1e-9);
        assert!((dims[1] - 2f64.sqrt()).abs() < 1e-9);
        assert!((dims[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn builtin_round_trip() {
        for (name, spec) in builtin_specs() {
            let text = spec.to_json();
            let (parsed, warnings) = parse_spec(&text).unwrap();
            assert!(warnings.is_empty(), "{name}: {warnings:?}");
            assert_eq!(parsed, spec, "{name}");
            parsed.to_modular().unwrap();
        }
    }

    #[test]
    fn missing_twist_names_the_label() {
        let mut spec = builtin_spec("Ising").unwrap();
        spec.twists.remove("sigma");
        let err = spec.to_modular().unwrap_err();
        assert_eq!(err.code(), "E_SCHEMA");
        assert!(err.to_string().contains("sigma"), "{err}");
    }

    #[test]
    fn twist_invariant_violation_is_reported() {
        // conjugate labels w and w2 must share their twist
        let mut spec = builtin_spec("Z3").unwrap();
        spec.twists.insert("w2".into(), "2/3".into());
        let err = spec.to_modular().unwrap_err();
        assert_eq!(err.code(), "E_INVARIANT");
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = load_category("{ not json").unwrap_err();
        match err {
            CatalogError::Parse { line, column, .. } => {
                assert_eq!(line, 1);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_warn_but_load() {
        let mut text = builtin_spec("Ising").unwrap().to_json();
        text = text.replacen('{', "{\n  \"comment\": \"hi\",", 1);
        let (_, warnings) = load_category(&text).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("comment"));
    }

    #[test]
    fn unit_must_come_first() {
        let mut spec = builtin_spec("Semion").unwrap();
        spec.labels.reverse();
        let err = spec.to_modular().unwrap_err();
        assert_eq!(err.code(), "E_INVARIANT");
    }

    #[test]
    fn conflicting_mirror_entries_are_rejected() {
        let mut spec = builtin_spec("Ising").unwrap();
        // eps*sigma = sigma is already present; the reversed key disagrees
        spec.fusion
            .insert("sigma*eps".into(), BTreeMap::from([("sigma".into(), 2)]));
        let err = spec.to_modular().unwrap_err();
        assert_eq!(err.code(), "E_SCHEMA");
    }

    #[test]
    fn conjugates_field_is_honored() {
        let mut spec = builtin_spec("Z3").unwrap();
        spec.conjugates = Some(BTreeMap::from([
            ("1".to_owned(), "1".to_owned()),
            ("w".to_owned(), "w2".to_owned()),
            ("w2".to_owned(), "w".to_owned()),
        ]));
        let md = spec.to_modular().unwrap();
        assert_eq!(md.ring().conj(1), 2);
    }

    #[test]
    fn export_table_is_deterministic_and_sized() {
        let md = builtin("Ising").unwrap();
        let (sectors, _) = full_spectrum(&md, 2).unwrap();
        let a = export_spectrum(&md, &sectors, ExportFormat::Table);
        let b = export_spectrum(&md, &sectors, ExportFormat::Table);
        assert_eq!(a, b);
        // header plus 15 sector rows
        assert_eq!(a.lines().count(), 16);
        assert!(a.contains("1/16"));
    }

    #[test]
    fn export_empty_is_header_only() {
        let md = builtin("Ising").unwrap();
        let out = export_spectrum(&md, &[], ExportFormat::Table);
        assert_eq!(out.lines().count(), 1);
        assert!(out.starts_with("kind"));
    }

    #[test]
    fn records_round_trip_through_parser() {
        let md = builtin("Ising").unwrap();
        let (sectors, _) = full_spectrum(&md, 2).unwrap();
        let text = export_spectrum(&md, &sectors, ExportFormat::Records);
        let records = parse_records(&text).unwrap();
        assert_eq!(records.len(), 15);
        let again: String = records
            .iter()
            .map(|r| serde_json::to_string(r).unwrap() + "\n")
            .collect();
        assert_eq!(text, again);
    }

    #[test]
    fn dim_formatting() {
        assert_eq!(format_dim(64.0), "64.0000000");
        assert_eq!(format_dim(2.8284271247461903), "2.82842712");
        assert_eq!(format_dim(1.0), "1.00000000");
        assert_eq!(format_dim(0.0), "0.00000000");
        assert_eq!(format_dim(1447.15163), "1447.15163");
    }
}
