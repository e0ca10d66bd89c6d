//! The table T(Q) of Q^{-1}(Q) for a two-part stable Q = (u, u-r).
//!
//! Rows are indexed by k in 1..=r-1 and columns by l in 1..=u-r. Each cell
//! is filled by one of three closed forms according to whether it lies in an
//! A row or in the type B / type C part of a B/C hook.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::partitions::{almost_rectangular, enumerate_partitions, render_block, Partition};
use crate::poset::{oblak, u_chain_length};
use crate::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellClass {
    A,
    B,
    C,
}

impl fmt::Display for CellClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CellClass::A => "A",
            CellClass::B => "B",
            CellClass::C => "C",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TableInvariants {
    pub t: usize,
    pub q: usize,
    pub d: usize,
    pub k: usize,
    pub c: usize,
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// min{u-r, floor((r-1)/2)}: index of the sentinel k = r.
pub fn hook_bound(u: usize, r: usize) -> usize {
    (u - r).min((r - 1) / 2)
}

/// t_max = min{u-r, floor((r-1)/2)} - 1, which is -1 when r = 2.
pub fn t_max(u: usize, r: usize) -> i64 {
    hook_bound(u, r) as i64 - 1
}

fn check_two_part(u: usize, r: usize) -> Result<()> {
    if r < 2 || u <= r {
        return domain(format!("need u > r >= 2, got u={u}, r={r}"));
    }
    Ok(())
}

pub fn table_invariants(u: usize, r: usize, t: usize) -> Result<TableInvariants> {
    check_two_part(u, r)?;
    let m = hook_bound(u, r);
    if t > m {
        return domain(format!("t={t} exceeds {m} for (u,r)=({u},{r})"));
    }
    let q = ceil_div(u - r, t + 1);
    let d = (t + 1) * q - (u - r);
    if t == m {
        return Ok(TableInvariants { t, q, d, k: r, c: 0 });
    }
    let k = t + ceil_div(u - t + d, q + 1);
    let c = if d == 0 {
        0
    } else {
        ceil_div(u - 2 * (t + 1) + d, q).saturating_sub(k - t)
    };
    Ok(TableInvariants { t, q, d, k, c })
}

/// All invariants for t = 0..=hook_bound, the last one being the sentinel.
pub fn all_invariants(u: usize, r: usize) -> Result<Vec<TableInvariants>> {
    (0..=hook_bound(u, r))
        .map(|t| table_invariants(u, r, t))
        .collect()
}

fn check_cell(u: usize, r: usize, k: usize, l: usize) -> Result<()> {
    check_two_part(u, r)?;
    if k == 0 || k > r - 1 || l == 0 || l > u - r {
        return domain(format!(
            "cell ({k},{l}) outside the {}x{} table of ({u},{})",
            r - 1,
            u - r,
            u - r
        ));
    }
    Ok(())
}

fn classify_with(inv: &[TableInvariants], u: usize, r: usize, k: usize, l: usize) -> (CellClass, usize) {
    let width = u - r;
    let hook_column = |t_row: usize| {
        let big_t = width - l;
        debug_assert!(big_t < t_row);
        let h = &inv[big_t];
        if l + (k - h.k) <= h.c {
            (CellClass::C, big_t)
        } else {
            (CellClass::B, big_t)
        }
    };
    for (t, h) in inv.iter().enumerate() {
        if k < h.k {
            return if l + t <= width {
                (CellClass::A, t)
            } else {
                hook_column(t)
            };
        }
        if k == h.k {
            return if l + t <= width {
                if l <= h.c {
                    (CellClass::C, t)
                } else {
                    (CellClass::B, t)
                }
            } else {
                hook_column(t)
            };
        }
    }
    unreachable!("the sentinel k = r bounds every row")
}

/// Class of cell (k, l) and the index t of the A row or B/C hook owning it.
pub fn classify_cell(u: usize, r: usize, k: usize, l: usize) -> Result<(CellClass, usize)> {
    check_cell(u, r, k, l)?;
    Ok(classify_with(&all_invariants(u, r)?, u, r, k, l))
}

/// Blocks `(total, count)` of the closed form for a cell of the given class.
fn cell_blocks(u: usize, r: usize, k: usize, l: usize, class: CellClass, h: &TableInvariants) -> Vec<(usize, usize)> {
    let t = h.t;
    match class {
        CellClass::A => vec![(u, k - t), (u - r, t + l)],
        CellClass::B => vec![(u - r + 2 * (t + 1), t + 1), (u - 2 * (t + 1), k + l - t - 1)],
        CellClass::C => {
            let qm = h.q - 1;
            vec![
                (u - r + 2 * (t + 1), t + 1),
                (u - 2 * (t + 1) - h.d * qm, k + l - t - h.d - 1),
                (h.d * qm, h.d),
            ]
        }
    }
}

fn blocks_to_partition(blocks: &[(usize, usize)]) -> Result<Partition> {
    let mut out = Partition::empty();
    for &(n, k) in blocks {
        if k == 0 && n == 0 {
            continue;
        }
        out = out.union(&almost_rectangular(n, k)?);
    }
    Ok(out)
}

fn blocks_label(blocks: &[(usize, usize)]) -> String {
    let s: Vec<String> = blocks
        .iter()
        .filter(|b| b.1 > 0)
        .map(|&(n, k)| render_block(n, k))
        .collect();
    format!("({})", s.join(","))
}

pub fn table_entry(u: usize, r: usize, k: usize, l: usize) -> Result<Partition> {
    check_cell(u, r, k, l)?;
    let inv = all_invariants(u, r)?;
    let (class, t) = classify_with(&inv, u, r, k, l);
    blocks_to_partition(&cell_blocks(u, r, k, l, class, &inv[t]))
}

#[derive(Clone, Debug, Serialize)]
pub struct TableCell {
    pub k: usize,
    pub l: usize,
    pub partition: Partition,
    pub class: CellClass,
    pub t: usize,
    /// The closed form in `[n]^k` block notation.
    pub label: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableQ {
    #[serde(rename = "Q")]
    pub q: Partition,
    pub u: usize,
    pub r: usize,
    pub invariants: Vec<TableInvariants>,
    pub cells: Vec<TableCell>,
}

/// A maximal set of cells owned by the same row or hook.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Region {
    pub t: usize,
    pub cells: Vec<(usize, usize)>,
}

pub fn two_part(q: &Partition) -> Result<(usize, usize)> {
    if q.len() != 2 || !q.is_stable() {
        return domain(format!("{q} is not a two-part stable partition"));
    }
    let u = q.parts()[0];
    Ok((u, u - q.parts()[1]))
}

impl TableQ {
    pub fn build(q: &Partition) -> Result<TableQ> {
        let (u, r) = two_part(q)?;
        let inv = all_invariants(u, r)?;
        let mut cells = Vec::with_capacity((r - 1) * (u - r));
        for k in 1..r {
            for l in 1..=u - r {
                let (class, t) = classify_with(&inv, u, r, k, l);
                let blocks = cell_blocks(u, r, k, l, class, &inv[t]);
                cells.push(TableCell {
                    k,
                    l,
                    partition: blocks_to_partition(&blocks)?,
                    class,
                    t,
                    label: blocks_label(&blocks),
                });
            }
        }
        Ok(TableQ {
            q: q.clone(),
            u,
            r,
            invariants: inv,
            cells,
        })
    }

    pub fn rows(&self) -> usize {
        self.r - 1
    }

    pub fn cols(&self) -> usize {
        self.u - self.r
    }

    pub fn cell(&self, k: usize, l: usize) -> &TableCell {
        assert!((1..=self.rows()).contains(&k) && (1..=self.cols()).contains(&l));
        &self.cells[(k - 1) * self.cols() + (l - 1)]
    }

    pub fn partitions(&self) -> BTreeSet<Partition> {
        self.cells.iter().map(|c| c.partition.clone()).collect()
    }

    /// B/C hooks in order of t, cells in reading order.
    pub fn hooks(&self) -> Vec<Region> {
        let mut by_t: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for c in self.cells.iter().filter(|c| c.class != CellClass::A) {
            by_t.entry(c.t).or_default().push((c.k, c.l));
        }
        by_t.into_iter().map(|(t, cells)| Region { t, cells }).collect()
    }

    /// A rows, one region per row k.
    pub fn a_rows(&self) -> Vec<Region> {
        let mut by_k: BTreeMap<usize, Region> = BTreeMap::new();
        for c in self.cells.iter().filter(|c| c.class == CellClass::A) {
            by_k.entry(c.k)
                .or_insert_with(|| Region { t: c.t, cells: Vec::new() })
                .cells
                .push((c.k, c.l));
        }
        by_k.into_values().collect()
    }

    pub fn has_normal_pattern(&self) -> bool {
        let no_c = self.cells.iter().all(|c| c.class != CellClass::C);
        let alternating = (1..=self.rows()).all(|k| {
            let class = self.cell(k, 1).class;
            (k % 2 == 1) == (class == CellClass::A)
        });
        no_c && alternating
    }

    pub fn first_column_largest_parts(&self) -> Vec<usize> {
        (1..=self.rows())
            .map(|k| self.cell(k, 1).partition.largest().unwrap_or(0))
            .collect()
    }

    /// For each k <= r-2, whether P_{k,1} >= P_{k+1,1} in the dominance order.
    pub fn column_one_dominance(&self) -> Vec<(usize, bool)> {
        (1..self.rows())
            .map(|k| {
                let a = &self.cell(k, 1).partition;
                let b = &self.cell(k + 1, 1).partition;
                (k, crate::partitions::bruhat_leq(a, b).unwrap_or(false))
            })
            .collect()
    }

    /// Text rendering: rows k, columns l, each entry tagged with its class and t.
    pub fn render(&self) -> String {
        let labels: Vec<String> = self
            .cells
            .iter()
            .map(|c| format!("{}{}{}", c.label, c.class, c.t))
            .collect();
        let width = labels.iter().map(|s| s.len()).max().unwrap_or(1);
        let mut out = format!("T({}): u={} r={}\n", self.q, self.u, self.r);
        for k in 1..=self.rows() {
            out.push_str(&format!("k={k:<3}"));
            for l in 1..=self.cols() {
                let i = (k - 1) * self.cols() + (l - 1);
                out.push_str(&format!(" {:<width$}", labels[i]));
            }
            out.push('\n');
        }
        out
    }
}

pub fn build_table(q: &Partition) -> Result<TableQ> {
    TableQ::build(q)
}

pub fn has_normal_pattern(q: &Partition) -> Result<bool> {
    Ok(TableQ::build(q)?.has_normal_pattern())
}

pub fn first_column_largest_parts(q: &Partition) -> Result<Vec<usize>> {
    Ok(TableQ::build(q)?.first_column_largest_parts())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CornerCase {
    A,
    B,
    C,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Corners {
    pub top_left: Partition,
    pub top_right: Partition,
    pub bottom_left: Partition,
    pub bottom_right: Partition,
    pub case: CornerCase,
}

/// The four corners from their direct formulas, independent of the table.
pub fn corners(q: &Partition) -> Result<Corners> {
    let (u, r) = two_part(q)?;
    if r < 3 {
        return domain("corners need r >= 3");
    }
    let w = u - r;
    let ones = |n: usize| vec![1; n];
    let mut tr = vec![u];
    tr.extend(ones(w));
    let mut br = vec![w + 2];
    br.extend(ones(u - 2));
    let (case, bottom_left) = if w <= (r - 1) / 2 {
        let mut bl = vec![3; w];
        bl.extend(ones(2 * r - u));
        (CornerCase::A, Partition::new(bl))
    } else if r % 2 == 1 {
        let p = almost_rectangular(u - 1, (r - 1) / 2)?.union(&almost_rectangular(w + 1, r.div_ceil(2))?);
        (CornerCase::B, p)
    } else {
        let p = almost_rectangular(u, r / 2)?.union(&almost_rectangular(w, r / 2)?);
        (CornerCase::C, p)
    };
    Ok(Corners {
        top_left: q.clone(),
        top_right: Partition::new(tr),
        bottom_left,
        bottom_right: Partition::new(br),
        case,
    })
}

/// The three checks on k_t: monotonicity of k_t - t with its bound, strict
/// growth inside [2, r-1], and the closed form of k_{t_max}.
pub fn check_invariant_relations(u: usize, r: usize) -> std::result::Result<(), String> {
    if r < 3 || u <= r {
        return Err(format!("need u > r >= 3, got ({u},{r})"));
    }
    let tm = t_max(u, r);
    if tm < 0 {
        return Err(format!("t_max < 0 for ({u},{r})"));
    }
    let tm = tm as usize;
    let inv: Vec<_> = (0..=tm)
        .map(|t| table_invariants(u, r, t).map_err(|e| e.to_string()))
        .collect::<std::result::Result<_, _>>()?;
    let bound = (r + 1).div_ceil(2);
    for w in inv.windows(2) {
        if w[0].k - w[0].t > w[1].k - w[1].t {
            return Err(format!("k_t - t decreases at t={} for ({u},{r})", w[1].t));
        }
        if w[0].k >= w[1].k {
            return Err(format!("k_t not increasing at t={} for ({u},{r})", w[1].t));
        }
    }
    for h in &inv {
        if h.k - h.t > bound {
            return Err(format!("k_t - t > {bound} at t={} for ({u},{r})", h.t));
        }
        if h.k < 2 || h.k > r - 1 {
            return Err(format!("k_{} = {} outside [2, r-1] for ({u},{r})", h.t, h.k));
        }
        let alt = 2 * h.t + 1 + ceil_div((r + 1).saturating_sub(2 * (h.t + 1)), h.q + 1);
        if alt != h.k {
            return Err(format!("alternative k_{} = {alt} != {} for ({u},{r})", h.t, h.k));
        }
    }
    let half = (r - 1) / 2;
    let expected = if u - r <= half {
        u - half - 1
    } else if r % 2 == 1 {
        r - 1
    } else {
        r - 2
    };
    let got = inv[tm].k;
    if got != expected {
        return Err(format!("k_tmax = {got}, expected {expected} for ({u},{r})"));
    }
    Ok(())
}

/// Which arithmetic conditions of the type definition a partition meets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeReport {
    pub a: usize,
    pub b: usize,
    pub types: BTreeSet<CellClass>,
    /// The type B conditions that hold: 1 for the bottom chain, 2 for the
    /// middle-chain alternative with n_{b-1} = 0.
    pub b_disjuncts: Vec<u8>,
}

/// Splits P into its two almost rectangular blocks (a, a-1) and (b, b-1).
fn two_blocks(p: &Partition) -> Result<(usize, usize)> {
    if p.r_p() != 2 {
        return domain(format!("{p} is not a union of exactly two almost rectangular blocks"));
    }
    let s = p.distinct_parts();
    let a = s[0];
    let b = if s.len() > 1 && s[1] + 1 == a { s[2] } else { s[1] };
    Ok((a, b))
}

pub fn type_of(p: &Partition, q: &Partition) -> Result<TypeReport> {
    let (a, b) = two_blocks(p)?;
    let u = q
        .largest()
        .ok_or_else(|| crate::Error::Domain("empty target".into()))?;
    let n = |i: usize| if i == 0 { 0 } else { p.multiplicity(i) };
    let mut types = BTreeSet::new();
    let mut b_disjuncts = Vec::new();
    if u == a * n(a) + (a - 1) * n(a - 1) {
        types.insert(CellClass::A);
    }
    if u == 2 * n(a) + 2 * n(a - 1) + b * n(b) + (b - 1) * n(b - 1) {
        b_disjuncts.push(1);
    }
    let middle = 2 * n(a) + (a - 1) * n(a - 1) + b * n(b);
    if b + 2 == a && n(b - 1) == 0 && u == middle {
        b_disjuncts.push(2);
    }
    if !b_disjuncts.is_empty() {
        types.insert(CellClass::B);
    }
    if b + 2 == a && n(a) > 0 && n(a - 1) > 0 && n(b) > 0 && n(b - 1) > 0 && u == middle {
        types.insert(CellClass::C);
    }
    Ok(TypeReport { a, b, types, b_disjuncts })
}

/// C = (c1, c2, s1, s2; a) with P_C = (a^{c1}, (a-1)^{c2+s2}, (a-2)^{c1+s1}, (a-3)^{c2}).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TypeCParam {
    pub c1: usize,
    pub c2: usize,
    pub s1: usize,
    pub s2: usize,
    pub a: usize,
}

impl TypeCParam {
    pub fn partition(&self) -> Partition {
        let a = self.a;
        Partition::from_multiplicities([
            (a, self.c1),
            (a - 1, self.c2 + self.s2),
            (a - 2, self.c1 + self.s1),
            (a - 3, self.c2),
        ])
    }

    pub fn image(&self) -> Partition {
        let a = self.a;
        let u = (self.c2 + self.s2) * (a - 1) + (self.c1 + self.s1) * (a - 2) + 2 * self.c1;
        Partition::new(vec![u, self.c1 * (a - 2) + self.c2 * (a - 3)])
    }

    pub fn num_parts(&self) -> usize {
        2 * self.c1 + 2 * self.c2 + self.s1 + self.s2
    }
}

pub fn type_c_param(p: &Partition) -> Result<TypeCParam> {
    let s = p.distinct_parts();
    if s.len() != 4 || s[0] < 4 || s[3] + 3 != s[0] {
        return domain(format!("{p} does not have four consecutive part sizes"));
    }
    let a = s[0];
    let c1 = p.multiplicity(a);
    let c2 = p.multiplicity(a - 3);
    let (n1, n2) = (p.multiplicity(a - 1), p.multiplicity(a - 2));
    if n1 < c2 || n2 < c1 {
        return domain(format!("{p} is not of type C"));
    }
    let param = TypeCParam { c1, c2, s1: n2 - c1, s2: n1 - c2, a };
    let middle = u_chain_length(p, a - 1)?.length;
    let top = u_chain_length(p, a)?.length;
    let bottom = u_chain_length(p, a - 2)?.length;
    if middle < top || middle < bottom {
        return domain(format!("{p} is not of type C: the middle chain is not longest"));
    }
    Ok(param)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Via {
    ClosedForm,
    BruteForce,
}

/// Ob(P) for every P of n, binned by image.
#[derive(Clone, Debug)]
pub struct ObBins {
    pub n: usize,
    pub bins: BTreeMap<Partition, Vec<Partition>>,
}

impl ObBins {
    /// Parallel over the partition list; bins keep enumeration order.
    pub fn compute(n: usize) -> ObBins {
        let all: Vec<Partition> = enumerate_partitions(n).collect();
        let images: Vec<Partition> = all.par_iter().map(oblak).collect();
        let mut bins: BTreeMap<Partition, Vec<Partition>> = BTreeMap::new();
        for (p, q) in all.into_iter().zip(images) {
            bins.entry(q).or_default().push(p);
        }
        ObBins { n, bins }
    }

    pub fn preimage(&self, q: &Partition) -> BTreeSet<Partition> {
        self.bins
            .get(q)
            .map(|v| v.iter().cloned().collect())
            .unwrap_or_default()
    }
}

pub fn inverse_image(q: &Partition, via: Via) -> Result<BTreeSet<Partition>> {
    if !q.is_stable() {
        return domain(format!("{q} is not stable"));
    }
    match via {
        Via::ClosedForm => match q.len() {
            1 => {
                let n = q.total();
                (1..=n).map(|k| almost_rectangular(n, k)).collect()
            }
            2 => Ok(TableQ::build(q)?.partitions()),
            _ => domain(format!("no closed form for the {}-part target {q}", q.len())),
        },
        Via::BruteForce => Ok(ObBins::compute(q.total()).preimage(q)),
    }
}

/// Two-part stable partitions of n, as (u, r).
pub fn two_part_targets(n: usize) -> Vec<(usize, usize)> {
    // u + (u - r) = n with u > r >= 2 and u - r >= 1
    (1..n)
        .filter_map(|w| {
            let u = n.checked_sub(w)?;
            let r = u.checked_sub(w)?;
            (r >= 2 && u > r).then_some((u, r))
        })
        .collect()
}

/// Closed form against brute force for every two-part target of every n up to
/// `max_n`; returns one message per failing target.
pub fn verify_completeness(max_n: usize) -> Vec<String> {
    let failures: Vec<Vec<String>> = (1..=max_n)
        .into_par_iter()
        .map(|n| {
            let bins = ObBins::compute(n);
            let mut out = Vec::new();
            for (u, r) in two_part_targets(n) {
                let q = Partition::new(vec![u, u - r]);
                let table = match TableQ::build(&q) {
                    Ok(t) => t,
                    Err(e) => {
                        out.push(format!("{q}: {e}"));
                        continue;
                    }
                };
                let cells = table.partitions();
                if cells.len() != (r - 1) * (u - r) {
                    out.push(format!("{q}: {} distinct cells, expected {}", cells.len(), (r - 1) * (u - r)));
                }
                for c in &table.cells {
                    if c.partition.len() != c.k + c.l {
                        out.push(format!("{q}: cell ({},{}) has {} parts", c.k, c.l, c.partition.len()));
                    }
                }
                if cells != bins.preimage(&q) {
                    out.push(format!("{q}: table differs from brute force"));
                }
            }
            out
        })
        .collect();
    failures.into_iter().flatten().collect()
}
