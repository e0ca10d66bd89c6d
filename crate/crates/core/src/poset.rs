//! The poset D_P, U-chain lengths and the Oblak recursion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::partitions::Partition;
use crate::{domain, Result};

/// Basis vector (u, i, k): position u in copy k of the row of length i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Vertex {
    pub u: usize,
    pub i: usize,
    pub k: usize,
}

impl Vertex {
    pub fn new(u: usize, i: usize, k: usize) -> Self {
        Vertex { u, i, k }
    }

    /// sl2 weight 2u - i - 1.
    pub fn weight(&self) -> i64 {
        2 * self.u as i64 - self.i as i64 - 1
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.u, self.i, self.k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeLabel {
    Beta(usize),
    Alpha(usize),
    E(usize, usize),
    W(usize),
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLabel::Beta(i) => write!(f, "beta_{i}"),
            EdgeLabel::Alpha(i) => write!(f, "alpha_{i}"),
            EdgeLabel::E(i, k) => write!(f, "e_{{{i},{k}}}"),
            EdgeLabel::W(i) => write!(f, "w_{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: Vertex,
    pub to: Vertex,
    pub label: EdgeLabel,
}

/// Vertices and elementary-map cover edges of D_P.
#[derive(Clone, Debug, Serialize)]
pub struct PosetDP {
    pub partition: Partition,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl PosetDP {
    pub fn build(p: &Partition) -> Result<PosetDP> {
        if p.is_empty() {
            return domain("the poset of the empty partition is not defined");
        }
        let mut vertices = Vec::with_capacity(p.total());
        for i in p.distinct_parts() {
            for k in 1..=p.multiplicity(i) {
                for u in 1..=i {
                    vertices.push(Vertex::new(u, i, k));
                }
            }
        }
        let s = p.distinct_parts();
        let mut edges = Vec::new();
        for (idx, &i) in s.iter().enumerate() {
            let ni = p.multiplicity(i);
            if let Some(&im) = s.get(idx + 1) {
                let nim = p.multiplicity(im);
                for u in 1..=im {
                    edges.push(Edge {
                        from: Vertex::new(u, i, ni),
                        to: Vertex::new(u, im, 1),
                        label: EdgeLabel::Beta(i),
                    });
                    edges.push(Edge {
                        from: Vertex::new(u, im, nim),
                        to: Vertex::new(u + i - im, i, 1),
                        label: EdgeLabel::Alpha(i),
                    });
                }
            }
            for k in 1..ni {
                for u in 1..=i {
                    edges.push(Edge {
                        from: Vertex::new(u, i, k),
                        to: Vertex::new(u, i, k + 1),
                        label: EdgeLabel::E(i, k),
                    });
                }
            }
            let isolated = p.multiplicity(i + 1) == 0 && (i == 1 || p.multiplicity(i - 1) == 0);
            if isolated {
                for u in 1..i {
                    edges.push(Edge {
                        from: Vertex::new(u, i, ni),
                        to: Vertex::new(u + 1, i, 1),
                        label: EdgeLabel::W(i),
                    });
                }
            }
        }
        Ok(PosetDP {
            partition: p.clone(),
            vertices,
            edges,
        })
    }

    pub fn weight(&self, v: &Vertex) -> i64 {
        v.weight()
    }

    /// The order-reversing involution (u,i,k) -> (i+1-u, i, n_i+1-k).
    pub fn tau(&self, v: &Vertex) -> Vertex {
        let ni = self.partition.multiplicity(v.i);
        Vertex::new(v.i + 1 - v.u, v.i, ni + 1 - v.k)
    }

    pub fn labels(&self) -> BTreeSet<String> {
        self.edges.iter().map(|e| e.label.to_string()).collect()
    }

    pub fn to_dot(&self) -> String {
        let id = |v: &Vertex| format!("\"{}_{}_{}\"", v.u, v.i, v.k);
        let mut out = format!("digraph D_P {{\n  label=\"D_P for {}\";\n", self.partition);
        for v in &self.vertices {
            out.push_str(&format!(
                "  {} [label=\"{}\\nrho={}\"];\n",
                id(v),
                v,
                v.weight()
            ));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  {} -> {} [label=\"{}\"];\n",
                id(&e.from),
                id(&e.to),
                e.label
            ));
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_poset(p: &Partition) -> Result<PosetDP> {
    PosetDP::build(p)
}

pub fn sl2_weights(p: &Partition) -> BTreeMap<Vertex, i64> {
    let mut out = BTreeMap::new();
    for (&i, &ni) in p.multiplicities() {
        for k in 1..=ni {
            for u in 1..=i {
                let v = Vertex::new(u, i, k);
                out.insert(v, v.weight());
            }
        }
    }
    out
}

/// First differences of the sorted weights.
pub fn dynkin_weights(p: &Partition) -> Result<Vec<i64>> {
    if p.total() < 2 {
        return domain("dynkin weights need n >= 2");
    }
    let mut w: Vec<i64> = sl2_weights(p).into_values().collect();
    w.sort_unstable();
    Ok(w.windows(2).map(|x| x[1] - x[0]).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UChainReport {
    pub a: usize,
    pub length: usize,
}

/// |C_a| = a n_a + (a-1) n_{a-1} + 2 sum_{i>a} n_i.
pub fn u_chain_length(p: &Partition, a: usize) -> Result<UChainReport> {
    if p.multiplicity(a) == 0 {
        return domain(format!("{a} is not a part of {p}"));
    }
    let above: usize = p.multiplicities().range(a + 1..).map(|(_, &m)| m).sum();
    let length = a * p.multiplicity(a) + (a - 1) * p.multiplicity(a - 1) + 2 * above;
    Ok(UChainReport { a, length })
}

/// All U-chain lengths, largest part first.
pub fn u_chain_table(p: &Partition) -> Vec<UChainReport> {
    p.distinct_parts()
        .into_iter()
        .map(|a| u_chain_length(p, a).expect("a is a part"))
        .collect()
}

pub fn oblak_largest_part(p: &Partition) -> usize {
    u_chain_table(p).iter().map(|c| c.length).max().unwrap_or(0)
}

/// P'(P, a): drop the rows of lengths a and a-1, shorten every longer row by two.
pub fn remove_u_chain(p: &Partition, a: usize) -> Result<Partition> {
    if p.multiplicity(a) == 0 {
        return domain(format!("{a} is not a part of {p}"));
    }
    let mut parts = Vec::with_capacity(p.len());
    for &x in p.parts() {
        if x > a {
            parts.push(x - 2);
        } else if x + 1 < a {
            parts.push(x);
        }
    }
    Ok(Partition::new(parts))
}

fn maximizers(p: &Partition) -> (usize, Vec<usize>) {
    let table = u_chain_table(p);
    let best = table.iter().map(|c| c.length).max().unwrap_or(0);
    let args = table.iter().filter(|c| c.length == best).map(|c| c.a).collect();
    (best, args)
}

/// Ob(P), breaking ties at the largest maximizing a.
pub fn oblak(p: &Partition) -> Partition {
    let mut out = Vec::new();
    let mut cur = p.clone();
    while !cur.is_empty() {
        if cur.is_almost_rectangular() {
            out.push(cur.total());
            break;
        }
        let (best, args) = maximizers(&cur);
        out.push(best);
        cur = remove_u_chain(&cur, args[0]).expect("maximizer is a part");
    }
    Partition::new(out)
}

/// Every tie-breaking choice leads to the same Ob(P).
pub fn oblak_tie_independence(p: &Partition) -> bool {
    fn all_results(p: &Partition) -> BTreeSet<Partition> {
        if p.is_empty() {
            return BTreeSet::from([Partition::empty()]);
        }
        if p.is_almost_rectangular() {
            return BTreeSet::from([Partition::new(vec![p.total()])]);
        }
        let (best, args) = maximizers(p);
        let mut out = BTreeSet::new();
        for a in args {
            let rest = remove_u_chain(p, a).expect("maximizer is a part");
            for r in all_results(&rest) {
                out.insert(r.with_part(best));
            }
        }
        out
    }
    all_results(p).len() == 1
}
