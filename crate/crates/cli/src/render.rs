//! Report rows shared by the JSON, table and DOT renderers, so every format
//! carries the same data.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;
use weil_core::alpha::alpha_expansion;
use weil_core::decomposition::{LaurentPolynomial, QElement, QLambda};
use weil_core::numerics::{CheckStatus, VerificationReport};
use weil_core::orbit::Orbit;
use weil_core::poset::{OrderIdeal, PLambdaPoset, PosetPoint};
use weil_core::Result;

pub fn points(poset: &PLambdaPoset, ideal: OrderIdeal) -> Vec<PosetPoint> {
    poset.members(ideal.set())
}

pub fn ideal_text(pts: &[PosetPoint]) -> String {
    if pts.is_empty() {
        return "∅".into();
    }
    let inner: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn signs_text(signs: &[u8]) -> String {
    if signs.is_empty() {
        return "—".into();
    }
    signs.iter().map(|s| s.to_string()).collect()
}

/// Exact integers as JSON numbers when they fit, strings otherwise.
fn integer_value(v: &BigInt) -> Value {
    i64::try_from(v).map(Value::from).unwrap_or_else(|_| Value::String(v.to_string()))
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<String>| {
        let padded: Vec<String> =
            cells.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    line(header.iter().map(|h| h.to_string()).collect());
    for row in rows {
        line(row);
    }
    out
}

#[derive(Serialize)]
pub struct PointRow {
    pub point: PosetPoint,
    pub multiplicity: u64,
    pub axis: bool,
}

#[derive(Serialize)]
pub struct PosetReport {
    pub lambda: Vec<u32>,
    pub points: Vec<PointRow>,
    /// `[lower, upper]` cover pairs.
    pub covers: Vec<[PosetPoint; 2]>,
}

impl PosetReport {
    pub fn new(poset: &PLambdaPoset) -> Self {
        let points = poset
            .points()
            .iter()
            .enumerate()
            .map(|(i, &point)| PointRow { point, multiplicity: poset.multiplicity(i), axis: 2 * point.v + 1 == point.k })
            .collect();
        let covers = poset.cover_relations().into_iter().map(|(a, b)| [a, b]).collect();
        PosetReport { lambda: poset.partition().parts().to_vec(), points, covers }
    }

    pub fn table(&self) -> String {
        let mut out = table(
            &["point", "mult", "axis"],
            self.points
                .iter()
                .map(|r| vec![r.point.to_string(), r.multiplicity.to_string(), if r.axis { "yes" } else { "" }.into()])
                .collect(),
        );
        out.push_str("covers:\n");
        for [a, b] in &self.covers {
            let _ = writeln!(out, "  {a} < {b}");
        }
        out
    }
}

#[derive(Serialize)]
pub struct IdealRow {
    pub ideal: Vec<PosetPoint>,
    pub weighted_size: u64,
    pub small: bool,
    pub perp: Vec<PosetPoint>,
}

pub fn ideal_rows(poset: &PLambdaPoset, ideals: &[OrderIdeal]) -> Vec<IdealRow> {
    ideals
        .iter()
        .map(|&i| IdealRow {
            ideal: points(poset, i),
            weighted_size: poset.weighted_size(i.set()),
            small: poset.is_small(i),
            perp: points(poset, poset.perp(i)),
        })
        .collect()
}

pub fn ideal_table(rows: &[IdealRow]) -> String {
    table(
        &["ideal", "[I]", "small", "perp"],
        rows.iter()
            .map(|r| {
                vec![
                    ideal_text(&r.ideal),
                    r.weighted_size.to_string(),
                    if r.small { "yes" } else { "no" }.into(),
                    ideal_text(&r.perp),
                ]
            })
            .collect(),
    )
}

#[derive(Serialize)]
pub struct QRow {
    pub ideal: Vec<PosetPoint>,
    pub signs: Vec<u8>,
    pub components: Vec<Vec<PosetPoint>>,
    pub theta: Vec<PosetPoint>,
}

pub fn q_rows(ql: &QLambda) -> Result<Vec<QRow>> {
    let poset = ql.poset();
    ql.elements()
        .iter()
        .map(|qe| {
            let split = ql.split(qe.ideal)?;
            Ok(QRow {
                ideal: points(poset, qe.ideal),
                signs: qe.signs.clone(),
                components: split.components.iter().map(|c| poset.members(c.members)).collect(),
                theta: points(poset, ql.theta(qe)?),
            })
        })
        .collect()
}

pub fn q_table(rows: &[QRow]) -> String {
    table(
        &["ideal", "signs", "components", "theta"],
        rows.iter()
            .map(|r| {
                let comps: Vec<String> = r.components.iter().map(|c| ideal_text(c)).collect();
                vec![ideal_text(&r.ideal), signs_text(&r.signs), comps.join(" "), ideal_text(&r.theta)]
            })
            .collect(),
    )
}

#[derive(Serialize)]
pub struct DimRow {
    pub ideal: Vec<PosetPoint>,
    pub signs: Vec<u8>,
    pub dim_poly: LaurentPolynomial,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_at_p: Option<Value>,
}

pub fn dim_rows(ql: &QLambda, eval: Option<&BigInt>) -> Result<Vec<DimRow>> {
    ql.elements()
        .iter()
        .map(|qe| {
            let dim = ql.dim_irreducible(qe)?;
            let dim_at_p = eval.map(|q| {
                let v = dim.evaluate(q);
                if v.is_integer() {
                    integer_value(&v.to_integer())
                } else {
                    Value::String(v.to_string())
                }
            });
            Ok(DimRow { ideal: points(ql.poset(), qe.ideal), signs: qe.signs.clone(), dim_poly: dim, dim_at_p })
        })
        .collect()
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn dim_table(rows: &[DimRow]) -> String {
    let with_eval = rows.iter().any(|r| r.dim_at_p.is_some());
    let mut header = vec!["ideal", "signs", "dim"];
    if with_eval {
        header.push("at p");
    }
    table(
        &header,
        rows.iter()
            .map(|r| {
                let mut row = vec![ideal_text(&r.ideal), signs_text(&r.signs), r.dim_poly.to_string()];
                if let Some(v) = &r.dim_at_p {
                    row.push(value_text(v));
                }
                row
            })
            .collect(),
    )
}

/// `Q_λ` as a Hasse diagram (cover relations of `≤`) with dimensions on the nodes.
pub fn q_dot(ql: &QLambda, rows: &[DimRow]) -> String {
    let elements = ql.elements();
    let mut out = String::from("digraph Q {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, r) in rows.iter().enumerate() {
        let mut label = format!("{} {}\\n{}", ideal_text(&r.ideal), signs_text(&r.signs), r.dim_poly);
        if let Some(v) = &r.dim_at_p {
            let _ = write!(label, " = {}", value_text(v));
        }
        let _ = writeln!(out, "  q{i} [label=\"{label}\"];");
    }
    let leq = |a: usize, b: usize| ql.q_leq(&elements[a], &elements[b]);
    for a in 0..elements.len() {
        for b in 0..elements.len() {
            if a == b || !leq(a, b) {
                continue;
            }
            let covered = (0..elements.len()).all(|c| c == a || c == b || !(leq(a, c) && leq(c, b)));
            if covered {
                let _ = writeln!(out, "  q{a} -> q{b} [arrowhead=none];");
            }
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
pub struct QeKey {
    pub ideal: Vec<PosetPoint>,
    pub signs: Vec<u8>,
}

#[derive(Serialize)]
pub struct AlphaEntry {
    #[serde(rename = "L")]
    pub l: Vec<PosetPoint>,
    pub sign: i8,
    pub p_exp: i64,
    pub two_exp: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_at_p: Option<String>,
}

#[derive(Serialize)]
pub struct AlphaTable {
    pub qe: QeKey,
    pub alpha: Vec<AlphaEntry>,
}

pub fn alpha_tables(ql: &QLambda, eval: Option<&BigInt>) -> Result<Vec<AlphaTable>> {
    ql.elements()
        .iter()
        .map(|qe: &QElement| {
            let alpha = alpha_expansion(ql, qe)?
                .into_iter()
                .map(|(l, c)| AlphaEntry {
                    l: points(ql.poset(), l),
                    sign: c.sign,
                    p_exp: c.p_exp,
                    two_exp: c.two_exp,
                    value_at_p: eval.map(|q| c.evaluate(q).to_string()),
                })
                .collect();
            Ok(AlphaTable { qe: QeKey { ideal: points(ql.poset(), qe.ideal), signs: qe.signs.clone() }, alpha })
        })
        .collect()
}

/// `sign · p^e / 2^t` as a fraction, e.g. `-1/(2p)` or `p^2/4`.
fn factored(e: &AlphaEntry) -> String {
    let power = |k: i64| match k {
        1 => "p".to_string(),
        k => format!("p^{k}"),
    };
    let mut num = if e.p_exp > 0 { power(e.p_exp) } else { "1".into() };
    if e.sign < 0 {
        num.insert(0, '-');
    }
    let mut den = Vec::new();
    if e.two_exp > 0 {
        den.push((1u64 << e.two_exp).to_string());
    }
    if e.p_exp < 0 {
        den.push(power(-e.p_exp));
    }
    match den.len() {
        0 => num,
        1 => format!("{num}/{}", den[0]),
        _ => format!("{num}/({})", den.concat()),
    }
}

pub fn alpha_table(tables: &[AlphaTable]) -> String {
    let with_eval = tables.iter().flat_map(|t| &t.alpha).any(|e| e.value_at_p.is_some());
    let mut header = vec!["ideal", "signs", "L", "alpha"];
    if with_eval {
        header.push("at p");
    }
    let mut rows = Vec::new();
    for t in tables {
        for e in &t.alpha {
            let mut row = vec![ideal_text(&t.qe.ideal), signs_text(&t.qe.signs), ideal_text(&e.l), factored(e)];
            if let Some(v) = &e.value_at_p {
                row.push(v.clone());
            }
            rows.push(row);
        }
    }
    table(&header, rows)
}

#[derive(Serialize)]
pub struct OrbitReport<'a> {
    pub p: u64,
    pub lambda: Vec<u32>,
    pub k_order: u128,
    pub orbits: &'a [Orbit],
}

pub fn orbit_table(report: &OrbitReport<'_>) -> String {
    let mut out = table(
        &["orbit", "size", "representative"],
        report
            .orbits
            .iter()
            .map(|o| {
                vec![
                    ideal_text(&o.points),
                    o.size.to_string(),
                    format!("a={:?} chi={:?}", o.representative.a.0, o.representative.chi.0),
                ]
            })
            .collect(),
    );
    let total: usize = report.orbits.iter().map(|o| o.size).sum();
    let _ = writeln!(out, "{} orbits, {} elements (|K| = {})", report.orbits.len(), total, report.k_order);
    out
}

pub fn verify_table(report: &VerificationReport) -> String {
    let mut out = table(
        &["check", "status", "deviation", "tolerance", "note"],
        report
            .checks
            .iter()
            .map(|c| {
                let status = match c.status {
                    CheckStatus::Pass => "pass",
                    CheckStatus::Fail if !c.gating => "fail (informational)",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::Skipped => "skipped",
                };
                vec![
                    c.name.clone(),
                    status.into(),
                    format!("{:.3e}", c.max_deviation),
                    format!("{:.0e}", c.tolerance),
                    c.detail.clone(),
                ]
            })
            .collect(),
    );
    let lambda: Vec<String> = report.lambda.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(
        out,
        "p = {}, λ = ({}), |A| = {}: {}",
        report.p,
        lambda.join(","),
        report.order,
        if report.passed { "pass" } else { "FAIL" }
    );
    out
}
