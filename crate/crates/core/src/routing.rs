//! Routing tables and the memoryless local routing function.
//!
//! A vertex `u` stores, for each neighbour `v` joined by the edge of pair
//! `{a_v, b_v}` (with `v = r(b_v)`), the labels `x_v`, `hi(b_v)` and
//! `hi(h(v))`. The low ends of both intervals equal `x_v`, so three labels
//! per neighbour are enough.

use bitvec::prelude::*;
use serde::Serialize;

use crate::decomposition::{HeavyPathLabelling, Interval, Label};
use crate::error::{Error, Result};
use crate::spanner::SpannerGraph;
use crate::wspd::Wspd;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RoutingEntry {
    pub x_v: Label,
    pub y_b: Label,
    pub y_h: Label,
}

impl RoutingEntry {
    pub fn descend_interval(&self) -> Interval {
        Interval::new(self.x_v, self.y_b)
    }

    pub fn apex_interval(&self) -> Interval {
        Interval::new(self.x_v, self.y_h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoutingTable {
    pub x_u: Label,
    pub entries: Vec<RoutingEntry>,
}

impl RoutingTable {
    pub fn degree(&self) -> usize {
        self.entries.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Ascend,
    Descend,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Ascend => "ascend",
            Phase::Descend => "descend",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Hop {
    pub next: Label,
    pub phase: Phase,
}

/// All tables, indexed by label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingTables {
    tables: Vec<RoutingTable>,
}

impl RoutingTables {
    /// Tables from a list ordered by label `1..=n`.
    pub fn from_tables(tables: Vec<RoutingTable>) -> Result<Self> {
        for (i, t) in tables.iter().enumerate() {
            if t.x_u as usize != i + 1 {
                return Err(Error::UnknownLabel(t.x_u));
            }
        }
        Ok(Self { tables })
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn get(&self, label: Label) -> Result<&RoutingTable> {
        (label as usize)
            .checked_sub(1)
            .and_then(|i| self.tables.get(i))
            .ok_or(Error::UnknownLabel(label))
    }

    pub fn tables(&self) -> &[RoutingTable] {
        &self.tables
    }

    pub fn tables_mut(&mut self) -> &mut [RoutingTable] {
        &mut self.tables
    }

    /// `2⌈lg n⌉ + 1`.
    pub fn hop_budget(&self) -> usize {
        2 * ceil_lg(self.len()) as usize + 1
    }

    /// Σ (3·deg(u) + 1)·⌈lg n⌉.
    pub fn total_bits(&self) -> usize {
        let w = ceil_lg(self.len()) as usize;
        self.tables.iter().map(|t| (3 * t.degree() + 1) * w).sum()
    }

    /// CSV rows `u_label,x_v,y_b,y_h`, by `u` then by `x_v`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u_label,x_v,y_b,y_h\n");
        for t in &self.tables {
            for e in &t.entries {
                out.push_str(&format!("{},{},{},{}\n", t.x_u, e.x_v, e.y_b, e.y_h));
            }
        }
        out
    }

    /// Parses [`to_csv`](Self::to_csv) output for `n` vertices.
    pub fn from_csv(text: &str, n: usize) -> Result<Self> {
        let mut tables: Vec<RoutingTable> = (1..=n)
            .map(|x| RoutingTable {
                x_u: x as Label,
                entries: Vec::new(),
            })
            .collect();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if i == 0 || line.is_empty() {
                continue;
            }
            let f: Vec<Label> = line
                .split(',')
                .map(|x| x.trim().parse::<Label>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                })?;
            if f.len() != 4 {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected 4 fields, got {}", f.len()),
                });
            }
            let t = (f[0] as usize)
                .checked_sub(1)
                .and_then(|k| tables.get_mut(k))
                .ok_or(Error::UnknownLabel(f[0]))?;
            t.entries.push(RoutingEntry {
                x_v: f[1],
                y_b: f[2],
                y_h: f[3],
            });
        }
        Ok(Self { tables })
    }
}

/// ⌈lg n⌉, 0 for n ≤ 1.
pub fn ceil_lg(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Builds every vertex's table from the spanner's pair annotations.
pub fn make_routing_tables(
    graph: &SpannerGraph,
    wspd: &Wspd,
    hp: &HeavyPathLabelling,
) -> Result<RoutingTables> {
    let n = graph.vertex_count();
    let mut tables: Vec<RoutingTable> = (1..=n)
        .map(|x| RoutingTable {
            x_u: x as Label,
            entries: Vec::new(),
        })
        .collect();
    for (i, e) in graph.edges().iter().enumerate() {
        let pair = wspd
            .pairs()
            .get(e.pair)
            .ok_or(Error::MissingAnnotation { edge: i })?;
        let (lu, lv) = (hp.label(e.u), hp.label(e.v));
        tables[lu as usize - 1].entries.push(RoutingEntry {
            x_v: lv,
            y_b: hp.interval(pair.b).hi,
            y_h: hp.apex_interval(e.v).hi,
        });
        tables[lv as usize - 1].entries.push(RoutingEntry {
            x_v: lu,
            y_b: hp.interval(pair.a).hi,
            y_h: hp.apex_interval(e.u).hi,
        });
    }
    for t in &mut tables {
        t.entries.sort();
    }
    Ok(RoutingTables { tables })
}

/// One forwarding decision at `x_u` for destination `x_q`.
///
/// Descending first: the unique entry with `x_q ∈ [x_v, y_b]`. Otherwise
/// ascend along the entry with `x_u ∈ [x_v, y_h]` whose interval is smallest;
/// the candidate intervals must form a chain.
pub fn route_step(x_u: Label, x_q: Label, table: &RoutingTable) -> Result<Hop> {
    let mut down = table
        .entries
        .iter()
        .filter(|e| e.descend_interval().contains(x_q));
    if let Some(e) = down.next() {
        let extra = down.count();
        if extra > 0 {
            return Err(Error::AmbiguousDescent {
                at: x_u,
                dest: x_q,
                count: extra + 1,
            });
        }
        return Ok(Hop {
            next: e.x_v,
            phase: Phase::Descend,
        });
    }

    let mut best: Option<&RoutingEntry> = None;
    for e in table.entries.iter().filter(|e| e.apex_interval().contains(x_u)) {
        best = Some(match best {
            None => e,
            Some(b) => {
                let (bi, ei) = (b.apex_interval(), e.apex_interval());
                if bi == ei {
                    return Err(Error::AmbiguousAscent { at: x_u });
                } else if bi.contains_interval(&ei) {
                    e
                } else if ei.contains_interval(&bi) {
                    b
                } else {
                    return Err(Error::AmbiguousAscent { at: x_u });
                }
            }
        });
    }
    best.map(|e| Hop {
        next: e.x_v,
        phase: Phase::Ascend,
    })
    .ok_or(Error::NoCandidate { at: x_u, dest: x_q })
}

/// A routed path: `labels[0] = p`, `labels.last() = q`, and `phases[i]`
/// tags the hop `labels[i] → labels[i+1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Route {
    pub labels: Vec<Label>,
    pub phases: Vec<Phase>,
}

impl Route {
    pub fn hops(&self) -> usize {
        self.phases.len()
    }

    /// Number of leading ascending hops.
    pub fn ascending_hops(&self) -> usize {
        self.phases.iter().take_while(|&&p| p == Phase::Ascend).count()
    }

    /// True if no ascending hop follows a descending one.
    pub fn phases_ordered(&self) -> bool {
        self.phases[self.ascending_hops()..]
            .iter()
            .all(|&p| p == Phase::Descend)
    }

    /// Length under a distance on labels, split as (total, ascending part).
    pub fn lengths(&self, dist: impl Fn(Label, Label) -> f64) -> (f64, f64) {
        let asc = self.ascending_hops();
        let mut total = 0.0;
        let mut up = 0.0;
        for (i, w) in self.labels.windows(2).enumerate() {
            let d = dist(w[0], w[1]);
            total += d;
            if i < asc {
                up += d;
            }
        }
        (total, up)
    }
}

/// Routes from label `p` to label `q`, failing once the hop budget
/// `2⌈lg n⌉ + 1` is exhausted.
pub fn route(tables: &RoutingTables, p: Label, q: Label) -> Result<Route> {
    tables.get(p)?;
    tables.get(q)?;
    let budget = tables.hop_budget();
    let mut r = Route {
        labels: vec![p],
        phases: Vec::new(),
    };
    let mut cur = p;
    while cur != q {
        if r.hops() == budget {
            return Err(Error::HopBudget {
                from: p,
                to: q,
                budget,
            });
        }
        let hop = route_step(cur, q, tables.get(cur)?)?;
        r.labels.push(hop.next);
        r.phases.push(hop.phase);
        cur = hop.next;
    }
    Ok(r)
}

/// A table in fixed-width little-endian fields of `⌈lg n⌉` bits, storing
/// `label - 1` so every value fits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedTable {
    width: usize,
    bits: BitVec<u64, Lsb0>,
}

impl PackedTable {
    pub fn pack(table: &RoutingTable, n: usize) -> Self {
        let width = ceil_lg(n) as usize;
        let mut bits = BitVec::<u64, Lsb0>::with_capacity((3 * table.degree() + 1) * width);
        let mut put = |label: Label| {
            let v = u64::from(label - 1);
            for k in 0..width {
                bits.push((v >> k) & 1 == 1);
            }
        };
        put(table.x_u);
        for e in &table.entries {
            put(e.x_v);
            put(e.y_b);
            put(e.y_h);
        }
        Self { width, bits }
    }

    pub fn bit_len(&self) -> usize {
        self.bits.len()
    }

    pub fn unpack(&self) -> RoutingTable {
        let fields: Vec<Label> = if self.width == 0 {
            // n = 1: a lone vertex with no neighbours
            vec![1]
        } else {
            self.bits
                .chunks(self.width)
                .map(|c| c.load_le::<u64>() as Label + 1)
                .collect()
        };
        RoutingTable {
            x_u: fields[0],
            entries: fields[1..]
                .chunks(3)
                .map(|f| RoutingEntry {
                    x_v: f[0],
                    y_b: f[1],
                    y_h: f[2],
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(x_v: Label, y_b: Label, y_h: Label) -> RoutingEntry {
        RoutingEntry { x_v, y_b, y_h }
    }

    #[test]
    fn lg() {
        assert_eq!(ceil_lg(1), 0);
        assert_eq!(ceil_lg(2), 1);
        assert_eq!(ceil_lg(3), 2);
        assert_eq!(ceil_lg(8), 3);
        assert_eq!(ceil_lg(9), 4);
        assert_eq!(ceil_lg(1024), 10);
    }

    #[test]
    fn descending_preferred() {
        let t = RoutingTable {
            x_u: 5,
            entries: vec![entry(1, 4, 8), entry(6, 8, 8)],
        };
        let hop = route_step(5, 7, &t).unwrap();
        assert_eq!(hop, Hop { next: 6, phase: Phase::Descend });
        // pure: same answer twice
        assert_eq!(route_step(5, 7, &t).unwrap(), hop);
    }

    #[test]
    fn ascending_picks_smallest_interval() {
        let t = RoutingTable {
            x_u: 3,
            entries: vec![entry(1, 2, 8), entry(2, 2, 4), entry(9, 9, 9)],
        };
        let hop = route_step(3, 12, &t).unwrap();
        assert_eq!(hop, Hop { next: 2, phase: Phase::Ascend });
    }

    #[test]
    fn corrupted_tables_are_reported() {
        let dup = RoutingTable {
            x_u: 1,
            entries: vec![entry(2, 4, 4), entry(3, 5, 5)],
        };
        assert!(matches!(
            route_step(1, 3, &dup),
            Err(Error::AmbiguousDescent { count: 2, .. })
        ));
        let crossing = RoutingTable {
            x_u: 4,
            entries: vec![entry(2, 2, 5), entry(3, 3, 6)],
        };
        assert!(matches!(route_step(4, 9, &crossing), Err(Error::AmbiguousAscent { .. })));
        let empty = RoutingTable { x_u: 4, entries: vec![] };
        assert!(matches!(route_step(4, 9, &empty), Err(Error::NoCandidate { .. })));
    }

    #[test]
    fn budget_stops_loops() {
        // 1 and 2 keep sending each other up toward 3
        let tables = RoutingTables::from_tables(vec![
            RoutingTable { x_u: 1, entries: vec![entry(2, 2, 2)] },
            RoutingTable { x_u: 2, entries: vec![entry(1, 1, 2)] },
            RoutingTable { x_u: 3, entries: vec![] },
        ])
        .unwrap();
        let mut t = tables.clone();
        t.tables_mut()[0].entries[0] = entry(2, 2, 3);
        let err = route(&t, 1, 3).unwrap_err();
        assert!(matches!(err, Error::NoCandidate { .. } | Error::HopBudget { .. }));
        let r = route(&tables, 2, 2).unwrap();
        assert_eq!(r.labels, vec![2]);
        assert_eq!(r.hops(), 0);
        assert!(matches!(route(&tables, 1, 9), Err(Error::UnknownLabel(9))));
    }

    #[test]
    fn packing_round_trip() {
        let t = RoutingTable {
            x_u: 7,
            entries: vec![entry(1, 4, 8), entry(8, 8, 8)],
        };
        let packed = PackedTable::pack(&t, 8);
        assert_eq!(packed.bit_len(), (3 * 2 + 1) * 3);
        assert_eq!(packed.unpack(), t);
        let lone = RoutingTable { x_u: 1, entries: vec![] };
        let packed = PackedTable::pack(&lone, 1);
        assert_eq!(packed.bit_len(), 0);
        assert_eq!(packed.unpack(), lone);
    }

    #[test]
    fn csv_round_trip() {
        let tables = RoutingTables::from_tables(vec![
            RoutingTable { x_u: 1, entries: vec![entry(2, 2, 2)] },
            RoutingTable { x_u: 2, entries: vec![entry(1, 1, 2)] },
        ])
        .unwrap();
        let csv = tables.to_csv();
        assert_eq!(csv, "u_label,x_v,y_b,y_h\n1,2,2,2\n2,1,1,2\n");
        assert_eq!(RoutingTables::from_csv(&csv, 2).unwrap(), tables);
        assert!(RoutingTables::from_csv("h\n1,2,x,2\n", 2).is_err());
    }
}
