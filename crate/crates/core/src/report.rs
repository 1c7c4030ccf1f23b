//! Rendering of reports as CSV, JSON or aligned text tables.
//!
//! Column order is fixed per report kind, missing values are empty CSV
//! fields (`null` in JSON), and JSON rationals are `"num/den"` strings.

use std::fmt::Write as _;

use num_rational::Rational64;
use serde_json::{json, Map, Value};

use crate::census::{Census, Cor1Report, TraceTally};
use crate::error::{Error, Result};
use crate::family::{ClosedPointScan, EqualityReport, ScanReport};
use crate::predict::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Int(i64),
    Rat(Rational64),
    Text(String),
    Empty,
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Rat(r) => r.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(n) => json!(n),
            Cell::Rat(r) => json!(format!("{}/{}", r.numer(), r.denom())),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<i64> for Cell {
    fn from(n: i64) -> Self {
        Cell::Int(n)
    }
}

impl From<Rational64> for Cell {
    fn from(r: Rational64) -> Self {
        Cell::Rat(r)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// A report: metadata plus rows under a fixed header.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub meta: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table {
            meta: Map::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn meta(mut self, key: &str, value: Value) -> Self {
        self.meta.insert(key.to_string(), value);
        self
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
            Format::Table => self.to_text(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("write to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text))
                .expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 output")
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({ "meta": Value::Object(self.meta.clone()), "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "# {k}: {v}");
        }
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::text).collect())
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| {
                cells
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain([self.columns[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |fields: Vec<&str>| {
            fields
                .iter()
                .zip(&widths)
                .map(|(f, &w)| format!("{f:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        let _ = writeln!(out, "{}", line(self.columns.clone()));
        for r in &cells {
            let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
        }
        out
    }
}

fn prediction_cells(o: Option<&Outcome>) -> (Cell, Cell) {
    match o.and_then(Outcome::admissible) {
        Some(p) => (p.value_h.into(), p.value_hw.into()),
        None => (Cell::Empty, Cell::Empty),
    }
}

pub const SCAN_COLUMNS: [&str; 9] = [
    "t",
    "count",
    "bound",
    "H",
    "Hw",
    "prediction_H",
    "prediction_Hw",
    "oracle",
    "verdict",
];

fn family_meta(t: Table, r: &ScanReport) -> Table {
    let degrees = json!({
        "j_degree": r.j_degree.map(|d| d.0),
        "separable": r.j_degree.map(|d| d.1),
        "declared": r.declared_j_degree,
    });
    t.meta("p", json!(r.p))
        .meta("k", json!(r.k))
        .meta("q", json!(r.q))
        .meta("family", json!(r.family))
        .meta("degrees", degrees)
}

pub fn scan_table(r: &ScanReport) -> Table {
    let mut t = family_meta(Table::new(&SCAN_COLUMNS), r)
        .meta("good", json!(r.good))
        .meta("bad", json!(r.bad))
        .meta("supersingular", json!(r.supersingular))
        .meta("model", json!(r.model.map(|m| m.to_string())))
        .meta("warnings", json!(r.warnings));
    for row in &r.rows {
        let (ph, phw) = prediction_cells(row.prediction.as_ref());
        t.push(vec![
            row.t.into(),
            row.count.into(),
            row.bound.into(),
            row.h.into(),
            row.h_w.into(),
            ph,
            phw,
            row.oracle.into(),
            row.verdict.map(|v| v.label()).into(),
        ]);
    }
    t
}

pub fn equality_table(r: &EqualityReport, scan: &ScanReport) -> Table {
    let mut t = family_meta(
        Table::new(&[
            "t",
            "count",
            "bound_H",
            "bound_Hw",
            "prediction_H",
            "prediction_Hw",
            "oracle",
            "verdict",
            "ratio",
        ]),
        scan,
    )
    .meta("warnings", json!(r.warnings));
    for row in &r.rows {
        let (ph, phw) = match &row.prediction {
            Some(p) => (p.value_h.into(), p.value_hw.into()),
            None => (Cell::Empty, Cell::Empty),
        };
        t.push(vec![
            row.t.into(),
            row.count.into(),
            row.bound_h.into(),
            row.bound_hw.into(),
            ph,
            phw,
            row.oracle.into(),
            row.verdict.label().into(),
            row.ratio.into(),
        ]);
    }
    t
}

pub fn closed_point_table(r: &ClosedPointScan, family: &str, p: u64, q: u64) -> Table {
    let mut t = Table::new(&["degree", "closed_points", "good_closed_points", "count"])
        .meta("family", json!(family))
        .meta("p", json!(p))
        .meta("q", json!(q))
        .meta("t", json!(r.t))
        .meta("B", json!(r.max_degree))
        .meta("count", json!(r.count))
        .meta("bound", json!(r.bound));
    for s in &r.per_degree {
        t.push(vec![
            (s.degree as u64).into(),
            s.closed_points.into(),
            s.good_closed_points.into(),
            s.count.into(),
        ]);
    }
    t
}

pub fn census_table(c: &Census) -> Table {
    let tally = &c.ordinary;
    let mut t = Table::new(&["t", "count", "kind"])
        .meta("p", json!(tally.p))
        .meta("k", json!(tally.k))
        .meta("q", json!(tally.q))
        .meta("classes", json!(c.classes));
    let mut rows: Vec<(i64, u64, &str)> = c
        .ordinary
        .iter()
        .map(|(t, n)| (t, n, "ordinary"))
        .chain(c.supersingular.iter().map(|(t, n)| (t, n, "supersingular")))
        .collect();
    rows.sort();
    for (tr, n, kind) in rows {
        t.push(vec![tr.into(), n.into(), kind.into()]);
    }
    t
}

pub fn cor1_table(r: &Cor1Report) -> Table {
    let mut t = Table::new(&["t", "count", "H", "Hw", "status"])
        .meta("p", json!(r.p))
        .meta("k", json!(r.k))
        .meta("q", json!(r.q))
        .meta("pass", json!(r.pass));
    for row in &r.rows {
        t.push(vec![
            row.t.into(),
            row.count.into(),
            row.h.into(),
            row.h_w.into(),
            row.status.label().into(),
        ]);
    }
    t
}

pub fn predict_table(model: &str, p: u64, k: u32, outcomes: &[Outcome]) -> Table {
    let mut t = Table::new(&["t", "disc", "status", "prediction_H", "prediction_Hw"])
        .meta("model", json!(model))
        .meta("p", json!(p))
        .meta("k", json!(k));
    for o in outcomes {
        let row = match o {
            Outcome::Admissible(pr) => vec![
                pr.t.into(),
                pr.disc.into(),
                "ADMISSIBLE".into(),
                pr.value_h.into(),
                pr.value_hw.into(),
            ],
            Outcome::Inadmissible { t, .. } => vec![
                (*t).into(),
                Cell::Empty,
                "INADMISSIBLE".into(),
                Cell::Empty,
                Cell::Empty,
            ],
        };
        t.push(row);
    }
    t
}

/// One row per discriminant: `disc, h, H, Hw`, plus the weighted `hw`
/// column when requested.
pub fn classnum_table(rows: &[(i64, u64, u64, Rational64, Rational64)], weighted: bool) -> Table {
    let columns: &[&'static str] = if weighted {
        &["disc", "h", "H", "Hw", "hw"]
    } else {
        &["disc", "h", "H", "Hw"]
    };
    let mut t = Table::new(columns);
    for &(d, h, big_h, big_hw, hw) in rows {
        let mut row = vec![d.into(), h.into(), big_h.into(), big_hw.into()];
        if weighted {
            row.push(hw.into());
        }
        t.push(row);
    }
    t
}

/// Reads the `t,count` columns of a scan or census CSV back into a tally.
/// Census rows of kind other than `ordinary` are skipped.
pub fn tally_from_csv(text: &str, p: u64, k: u32, q: u64) -> Result<TraceTally> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            reason: e.to_string(),
        })?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (Some(ti), Some(ci)) = (col("t"), col("count")) else {
        return Err(Error::Parse {
            line: 1,
            reason: "missing t or count column".into(),
        });
    };
    let kind = col("kind");
    let mut tally = TraceTally::new(p, k, q);
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let perr = |reason: String| Error::Parse { line, reason };
        let rec = rec.map_err(|e| perr(e.to_string()))?;
        if kind.is_some_and(|c| &rec[c] != "ordinary") {
            continue;
        }
        let t: i64 = rec[ti].parse().map_err(|_| perr("bad t".into()))?;
        let n: u64 = rec[ci].parse().map_err(|_| perr("bad count".into()))?;
        tally.add(t, n);
    }
    Ok(tally)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::trace_census;
    use crate::family::{builtin_family, scan_rational};
    use crate::ff::make_field;

    #[test]
    fn scan_csv_layout_and_round_trip() {
        let ctx = make_field(11, 1).unwrap();
        let spec = builtin_family("x1_5", 11).unwrap();
        let scan = scan_rational(&spec, &ctx).unwrap();
        let csv = scan_table(&scan).to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,count,bound,H,Hw,prediction_H,prediction_Hw,oracle,verdict"
        );
        assert_eq!(lines.next().unwrap(), "-3,4,24,2,2,24,24,4,BOUND_ONLY");
        assert_eq!(lines.next().unwrap(), "2,4,24,2,2,24,24,4,BOUND_ONLY");
        assert_eq!(tally_from_csv(&csv, 11, 1, 11).unwrap(), scan.tally);
    }

    #[test]
    fn census_csv_round_trip() {
        let ctx = make_field(7, 1).unwrap();
        let census = trace_census(&ctx).unwrap();
        let csv = census_table(&census).to_csv();
        assert_eq!(tally_from_csv(&csv, 7, 1, 7).unwrap(), census.ordinary);
    }

    #[test]
    fn missing_values_are_empty_fields() {
        let t = predict_table(
            "gamma1",
            11,
            1,
            &[Outcome::Inadmissible { t: 1, reason: "" }],
        );
        assert_eq!(t.to_csv().lines().nth(1).unwrap(), "1,,INADMISSIBLE,,");
    }

    #[test]
    fn json_rationals_are_strings() {
        let t = classnum_table(
            &[(-3, 1, 1, Rational64::new(1, 3), Rational64::new(1, 3))],
            false,
        );
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["rows"][0]["Hw"], json!("1/3"));
        assert_eq!(v["rows"][0]["H"], json!(1));
    }
}
