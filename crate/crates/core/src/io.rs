//! Text formats: point and matrix input, the spanner file, number printing.

use serde::{Deserialize, Serialize};

use crate::decomposition::{Interval, Label};
use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, PointSet};
use crate::network::Network;
use crate::routing::{RoutingEntry, RoutingTable, RoutingTables};

/// Twelve significant digits, trailing zeros dropped.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..15).contains(&e) {
        let dec = (11 - e).max(0) as usize;
        trim_zeros(format!("{x:.dec$}"))
    } else {
        let s = format!("{x:.11e}");
        let (mant, exp) = s.split_once('e').expect("exponent form");
        format!("{}e{}", trim_zeros(mant.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Rounds to twelve significant digits, for serialized derived values.
pub fn round12(x: f64) -> f64 {
    fmt12(x).parse().unwrap_or(x)
}

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|f| !f.is_empty())
}

fn parse_row(line: &str, lineno: usize) -> Result<Vec<f64>> {
    fields(line)
        .map(|f| {
            f.parse::<f64>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("{f:?}: {e}"),
            })
        })
        .collect()
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// One point per line, coordinates separated by commas or whitespace;
/// blank lines and `#` comments are skipped.
pub fn parse_points(text: &str) -> Result<PointSet> {
    let rows = content_lines(text)
        .map(|(i, l)| parse_row(l, i))
        .collect::<Result<Vec<_>>>()?;
    PointSet::from_coords(rows)
}

/// First line `n`, then `n` rows of `n` distances.
pub fn parse_matrix(text: &str) -> Result<DistanceMatrix> {
    let mut lines = content_lines(text);
    let (first, header) = lines.next().ok_or(Error::Empty)?;
    let n: usize = header.parse().map_err(|_| Error::Parse {
        line: first,
        msg: format!("expected a point count, got {header:?}"),
    })?;
    let rows = lines
        .map(|(i, l)| {
            let row = parse_row(l, i)?;
            if row.len() != n {
                return Err(Error::Parse {
                    line: i,
                    msg: format!("expected {n} entries, got {}", row.len()),
                });
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.len() != n {
        return Err(Error::InvalidMatrix(format!("expected {n} rows, got {}", rows.len())));
    }
    DistanceMatrix::new(rows)
}

pub fn points_to_csv(points: &PointSet) -> String {
    let mut out = String::new();
    for i in 0..points.len() {
        let row: Vec<String> = points.coords(i).iter().map(|&c| fmt12(c)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: Label,
    pub v: Label,
    pub a_interval: Interval,
    pub b_interval: Interval,
    pub length: f64,
}

/// The spanner as written to disk. Vertices are named by label; `labels[p]`
/// and `apex_intervals[p]` are indexed by input point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpannerFile {
    pub n: usize,
    pub s: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub metric: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub points: Option<Vec<Vec<f64>>>,
    pub labels: Vec<Label>,
    pub apex_intervals: Vec<Interval>,
    pub edges: Vec<EdgeRecord>,
}

impl SpannerFile {
    pub fn from_network(net: &Network, seed: Option<u64>) -> Self {
        let hp = &net.labelling;
        let n = net.len();
        let edges = net
            .spanner
            .edges()
            .iter()
            .map(|e| {
                let pair = net.wspd.pairs()[e.pair];
                EdgeRecord {
                    u: hp.label(e.u),
                    v: hp.label(e.v),
                    a_interval: hp.interval(pair.a),
                    b_interval: hp.interval(pair.b),
                    length: round12(e.length),
                }
            })
            .collect();
        Self {
            n,
            s: net.separation(),
            tau: net.tau(),
            seed,
            metric: net.space.descriptor(),
            points: net
                .space
                .points()
                .map(|p| (0..p.len()).map(|i| p.coords(i).to_vec()).collect()),
            labels: (0..n).map(|p| hp.label(p)).collect(),
            apex_intervals: (0..n).map(|p| hp.apex_interval(p)).collect(),
            edges,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(text)?;
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        if self.labels.len() != self.n || self.apex_intervals.len() != self.n {
            return Err(Error::InvalidMatrix(
                "labels and apex intervals must list every point".into(),
            ));
        }
        let mut seen = vec![false; self.n];
        for &l in &self.labels {
            let slot = (l as usize)
                .checked_sub(1)
                .and_then(|i| seen.get_mut(i))
                .ok_or(Error::UnknownLabel(l))?;
            if std::mem::replace(slot, true) {
                return Err(Error::UnknownLabel(l));
            }
        }
        for e in &self.edges {
            for l in [e.u, e.v] {
                if l == 0 || l as usize > self.n {
                    return Err(Error::UnknownLabel(l));
                }
            }
        }
        Ok(())
    }

    /// Point index carrying each label.
    pub fn points_by_label(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (p, &l) in self.labels.iter().enumerate() {
            out[l as usize - 1] = p;
        }
        out
    }

    /// Rebuilds the routing tables from the edge annotations.
    pub fn tables(&self) -> Result<RoutingTables> {
        let by_label = self.points_by_label();
        let apex_hi = |l: Label| self.apex_intervals[by_label[l as usize - 1]].hi;
        let mut tables: Vec<RoutingTable> = (1..=self.n)
            .map(|x| RoutingTable {
                x_u: x as Label,
                entries: Vec::new(),
            })
            .collect();
        for e in &self.edges {
            tables[e.u as usize - 1].entries.push(RoutingEntry {
                x_v: e.v,
                y_b: e.b_interval.hi,
                y_h: apex_hi(e.v),
            });
            tables[e.v as usize - 1].entries.push(RoutingEntry {
                x_v: e.u,
                y_b: e.a_interval.hi,
                y_h: apex_hi(e.u),
            });
        }
        for t in &mut tables {
            t.entries.sort();
        }
        RoutingTables::from_tables(tables)
    }

    /// Stored edge length between two labels, if they are adjacent.
    pub fn edge_length(&self, x: Label, y: Label) -> Option<f64> {
        self.edges
            .iter()
            .find(|e| (e.u, e.v) == (x, y) || (e.u, e.v) == (y, x))
            .map(|e| e.length)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt12(0.0), "0");
        assert_eq!(fmt12(1.0), "1");
        assert_eq!(fmt12(7.0 / 3.0), "2.33333333333");
        assert_eq!(fmt12(-0.125), "-0.125");
        assert_eq!(fmt12(123456.0), "123456");
        assert_eq!(fmt12(1e-9), "1e-9");
        assert_eq!(fmt12(2.0f64.sqrt() * 1e20), "1.41421356237e20");
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
    }

    #[test]
    fn points_with_comments() {
        let p = parse_points("# header\n0.1, 0.2\n\n0.3 0.4\n").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coords(1), &[0.3, 0.4]);
        assert!(matches!(parse_points("0.1,zz\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_points("0.1\n0.1\n"),
            Err(Error::DuplicatePoint { .. })
        ));
    }

    #[test]
    fn matrix_file() {
        let m = parse_matrix("3\n0 1 2\n1 0 1\n2 1 0\n").unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m.get(0, 2).unwrap(), 2.0);
        assert!(parse_matrix("3\n0 1 2\n1 0 1\n").is_err());
        assert!(parse_matrix("2\n0 1\n1\n").is_err());
        assert!(matches!(
            parse_matrix("2\n0 nan\nnan 0\n"),
            Err(Error::UndefinedEntry(..))
        ));
    }
}
