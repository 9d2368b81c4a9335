//! Non-crossing partitions, their nesting structure, and the block-subset
//! machinery used by the `omega` recursion.
//!
//! A partition is stored as a list of blocks over an arbitrary finite set of
//! positive integers (its ground set). Partitions of `{1..n}` are the common
//! case, but irreducible components and `V`-components keep their original
//! labels, so the ground set is not renumbered.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{domain, Error, Result};
use crate::trees::{Forest, RootedTree};

/// Largest `n` accepted by the enumerators unless the caller raises it.
pub const DEFAULT_MAX_N: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NCPartition {
    blocks: Vec<Vec<usize>>,
}

impl NCPartition {
    /// Builds a non-crossing partition of `{1..n}`.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let p = Self::on_subset(blocks)?;
        let ground = p.ground();
        if ground.len() != n || ground.iter().enumerate().any(|(i, &x)| x != i + 1) {
            return domain(format!("blocks do not partition {{1..{n}}}"));
        }
        Ok(p)
    }

    /// Builds a non-crossing partition of the union of `blocks`.
    pub fn on_subset(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for b in &blocks {
            if b.is_empty() {
                return domain("empty block");
            }
            for &x in b {
                if x == 0 {
                    return domain("elements must be positive");
                }
                if !seen.insert(x) {
                    return domain(format!("element {x} appears twice"));
                }
            }
        }
        let p = Self::canonical(blocks);
        for i in 0..p.blocks.len() {
            for j in i + 1..p.blocks.len() {
                if blocks_cross(&p.blocks[i], &p.blocks[j]) {
                    return domain(format!("blocks {:?} and {:?} cross", p.blocks[i], p.blocks[j]));
                }
            }
        }
        Ok(p)
    }

    /// Sorts elements and blocks without validating.
    pub(crate) fn canonical(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        NCPartition { blocks }
    }

    /// The partition with no blocks (empty ground set).
    pub fn empty() -> Self {
        NCPartition { blocks: Vec::new() }
    }

    /// `1_n`, the single-block partition.
    pub fn one(n: usize) -> Self {
        NCPartition { blocks: if n == 0 { vec![] } else { vec![(1..=n).collect()] } }
    }

    /// `0_n`, all singletons.
    pub fn zero(n: usize) -> Self {
        NCPartition { blocks: (1..=n).map(|i| vec![i]).collect() }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Sorted ground set.
    pub fn ground(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        g.sort_unstable();
        g
    }

    /// Number of elements in the ground set.
    pub fn size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    fn min_of(&self, i: usize) -> usize {
        self.blocks[i][0]
    }

    fn max_of(&self, i: usize) -> usize {
        *self.blocks[i].last().unwrap()
    }

    fn block_of_element(&self) -> HashMap<usize, usize> {
        let mut map = HashMap::new();
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                map.insert(x, i);
            }
        }
        map
    }

    /// True iff the minimum and maximum of the ground set share a block.
    pub fn is_irreducible(&self) -> bool {
        if self.blocks.is_empty() {
            return false;
        }
        let g = self.ground();
        let owner = self.block_of_element();
        owner[&g[0]] == owner[g.last().unwrap()]
    }

    /// True iff every block is a run of consecutive ground-set elements.
    pub fn is_interval(&self) -> bool {
        let g = self.ground();
        let pos: HashMap<usize, usize> = g.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        self.blocks
            .iter()
            .all(|b| b.windows(2).all(|w| pos[&w[1]] == pos[&w[0]] + 1))
    }

    /// Block `i` strictly surrounds block `j`. Indices are not checked.
    pub(crate) fn encloses(&self, i: usize, j: usize) -> bool {
        i != j && self.min_of(i) < self.min_of(j) && self.max_of(j) < self.max_of(i)
    }

    /// Whether block `j` lies nested inside block `i`.
    pub fn nesting_lt(&self, i: usize, j: usize) -> Result<bool> {
        let k = self.blocks.len();
        if i >= k || j >= k {
            return domain(format!("block index out of range (have {k} blocks)"));
        }
        if i == j {
            return domain("nesting is only defined between distinct blocks");
        }
        Ok(self.encloses(i, j))
    }

    /// For each block, the innermost block directly surrounding it.
    pub fn parents(&self) -> Vec<Option<usize>> {
        (0..self.blocks.len())
            .map(|j| {
                (0..self.blocks.len())
                    .filter(|&i| self.encloses(i, j))
                    .max_by_key(|&i| self.min_of(i))
            })
            .collect()
    }

    /// Indices of the nesting-minimal blocks.
    pub fn outer_blocks(&self) -> Vec<usize> {
        self.parents()
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.is_none().then_some(i))
            .collect()
    }

    /// Left-to-right decomposition into irreducible partitions of intervals
    /// of the ground set.
    pub fn irreducible_components(&self) -> Vec<NCPartition> {
        let ground = self.ground();
        let owner = self.block_of_element();
        let mut comps = Vec::new();
        let mut pos = 0;
        while pos < ground.len() {
            let start = ground[pos];
            let end = self.max_of(owner[&start]);
            let blocks: Vec<Vec<usize>> = self
                .blocks
                .iter()
                .filter(|b| b[0] >= start && *b.last().unwrap() <= end)
                .cloned()
                .collect();
            pos += blocks.iter().map(Vec::len).sum::<usize>();
            comps.push(NCPartition { blocks });
        }
        comps
    }

    /// The rooted forest of block nesting, one tree per irreducible component.
    pub fn nesting_forest(&self) -> Forest {
        let parents = self.parents();
        let mut children = vec![Vec::new(); self.blocks.len()];
        let mut roots = Vec::new();
        for (j, p) in parents.iter().enumerate() {
            match p {
                Some(i) => children[*i].push(j),
                None => roots.push(j),
            }
        }
        fn build(v: usize, children: &[Vec<usize>]) -> RootedTree {
            RootedTree::from_children(children[v].iter().map(|&c| build(c, children)).collect())
        }
        Forest::new(roots.iter().map(|&r| build(r, &children)).collect())
    }

    /// The nesting tree of an irreducible partition.
    pub fn nesting_tree(&self) -> Result<RootedTree> {
        if !self.is_irreducible() {
            return domain("nesting tree requires an irreducible partition");
        }
        Ok(self.nesting_forest().trees()[0].clone())
    }

    /// Number of total block orders refining nesting, `|t(p)|! / t(p)!`.
    pub fn monotone_count(&self) -> BigUint {
        self.nesting_forest().monotone_count()
    }

    /// All subsets of blocks containing every outer block.
    pub fn sub_families(&self) -> Vec<BlockSubset> {
        let parents = self.parents();
        let outer: Vec<usize> = (0..self.blocks.len()).filter(|&i| parents[i].is_none()).collect();
        let free: Vec<usize> = (0..self.blocks.len()).filter(|&i| parents[i].is_some()).collect();
        (0u64..1 << free.len())
            .map(|mask| {
                let mut selected = outer.clone();
                selected.extend(
                    free.iter()
                        .enumerate()
                        .filter(|(b, _)| mask >> b & 1 == 1)
                        .map(|(_, &i)| i),
                );
                selected.sort_unstable();
                BlockSubset { base: self.clone(), selected }
            })
            .collect()
    }

    /// Remove one block, keeping the remaining blocks with their labels.
    pub fn without_block(&self, i: usize) -> NCPartition {
        let mut blocks = self.blocks.clone();
        blocks.remove(i);
        NCPartition { blocks }
    }

    /// Min-max order: `self` refines `other` and every block of `other` has
    /// its minimum and maximum inside one block of `self`.
    pub fn min_max_lt(&self, other: &NCPartition) -> Result<bool> {
        if self.ground() != other.ground() {
            return domain("partitions live on different ground sets");
        }
        let owner = self.block_of_element();
        let other_owner = other.block_of_element();
        let refines = self
            .blocks
            .iter()
            .all(|b| b.iter().all(|x| other_owner[x] == other_owner[&b[0]]));
        let min_max = other
            .blocks
            .iter()
            .all(|b| owner[&b[0]] == owner[b.last().unwrap()]);
        Ok(refines && min_max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.blocks)
    }
}

fn blocks_cross(a: &[usize], b: &[usize]) -> bool {
    // merge and count alternations between the two blocks; four runs means
    // an a < b < c < d interleaving exists
    let (mut i, mut j) = (0, 0);
    let mut runs = 0;
    let mut last = None;
    while i < a.len() || j < b.len() {
        let from_a = j >= b.len() || (i < a.len() && a[i] < b[j]);
        if from_a {
            i += 1;
        } else {
            j += 1;
        }
        if last != Some(from_a) {
            runs += 1;
            last = Some(from_a);
        }
    }
    runs >= 4
}

impl fmt::Display for NCPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (k, x) in b.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for NCPartition {
    type Err = Error;

    /// Parses the text form `{{1,3},{2}}` over an arbitrary ground set.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("expected outer braces in {s:?}")))?;
        let mut blocks = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('{')
                .ok_or_else(|| Error::Parse(format!("expected '{{' at {rest:?}")))?;
            let close = body
                .find('}')
                .ok_or_else(|| Error::Parse("unterminated block".into()))?;
            let block = body[..close]
                .split(',')
                .map(|x| x.parse::<usize>().map_err(|e| Error::Parse(format!("{x:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
            rest = &body[close + 1..];
            if let Some(r) = rest.strip_prefix(',') {
                if r.is_empty() {
                    return Err(Error::Parse("trailing comma".into()));
                }
                rest = r;
            } else if !rest.is_empty() {
                return Err(Error::Parse(format!("unexpected {rest:?}")));
            }
        }
        NCPartition::on_subset(blocks)
    }
}

/// A non-crossing partition with a total order on its blocks refining
/// nesting. `labels[i]` is the 1-based rank of block `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotonePartition {
    base: NCPartition,
    labels: Vec<usize>,
}

impl MonotonePartition {
    pub fn new(base: NCPartition, labels: Vec<usize>) -> Result<Self> {
        let k = base.num_blocks();
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if labels.len() != k || sorted.iter().enumerate().any(|(i, &l)| l != i + 1) {
            return domain("labels must be a bijection onto 1..|blocks|");
        }
        for i in 0..k {
            for j in 0..k {
                if base.encloses(i, j) && labels[i] > labels[j] {
                    return domain("labels do not refine the nesting order");
                }
            }
        }
        Ok(MonotonePartition { base, labels })
    }

    pub fn base(&self) -> &NCPartition {
        &self.base
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Blocks listed in label order.
    pub fn ordered_blocks(&self) -> Vec<&[usize]> {
        let mut idx: Vec<usize> = (0..self.labels.len()).collect();
        idx.sort_unstable_by_key(|&i| self.labels[i]);
        idx.into_iter().map(|i| self.base.blocks[i].as_slice()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "blocks": self.base.blocks, "labels": self.labels })
    }
}

/// Blocks in label order, e.g. `{1,4}<{2}<{3}`.
impl fmt::Display for MonotonePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.ordered_blocks().into_iter().enumerate() {
            if i > 0 {
                write!(f, "<")?;
            }
            let inner: Vec<String> = b.iter().map(ToString::to_string).collect();
            write!(f, "{{{}}}", inner.join(","))?;
        }
        Ok(())
    }
}

/// A set of blocks of `base` that contains every outer block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockSubset {
    base: NCPartition,
    selected: Vec<usize>,
}

/// The partition `nu` formed by the selected blocks, and the family of
/// irreducible pieces hanging below each selected block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VComponents {
    pub nu: NCPartition,
    pub comps: Vec<NCPartition>,
}

impl BlockSubset {
    pub fn new(base: NCPartition, mut selected: Vec<usize>) -> Result<Self> {
        selected.sort_unstable();
        selected.dedup();
        if selected.iter().any(|&i| i >= base.num_blocks()) {
            return domain("selected block index out of range");
        }
        if base.outer_blocks().iter().any(|o| selected.binary_search(o).is_err()) {
            return domain("selection must contain every outer block");
        }
        Ok(BlockSubset { base, selected })
    }

    pub fn base(&self) -> &NCPartition {
        &self.base
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    /// Splits the base into `V`-connected components: every block joins the
    /// nearest selected block at or above it in the nesting order.
    pub fn v_components(&self) -> VComponents {
        let parents = self.base.parents();
        let is_selected = |i: usize| self.selected.binary_search(&i).is_ok();
        let mut groups: Vec<Vec<Vec<usize>>> = vec![Vec::new(); self.selected.len()];
        for b in 0..self.base.num_blocks() {
            let mut cur = b;
            while !is_selected(cur) {
                cur = parents[cur].expect("outer blocks are always selected");
            }
            let slot = self.selected.binary_search(&cur).unwrap();
            groups[slot].push(self.base.blocks[b].clone());
        }
        let nu = NCPartition::canonical(
            self.selected.iter().map(|&i| self.base.blocks[i].clone()).collect(),
        );
        // selected indices ascend with block minimum, so groups already follow nu's order
        let comps = groups.into_iter().map(NCPartition::canonical).collect();
        VComponents { nu, comps }
    }
}

/// Inverse of [`BlockSubset::v_components`]: glue irreducible pieces back
/// together and select each piece's outer block.
pub fn assemble_components(comps: &[NCPartition]) -> Result<BlockSubset> {
    if comps.iter().any(|c| !c.is_irreducible()) {
        return domain("every component must be irreducible");
    }
    let blocks: Vec<Vec<usize>> = comps.iter().flat_map(|c| c.blocks.iter().cloned()).collect();
    let base = NCPartition::on_subset(blocks)?;
    let selected = comps
        .iter()
        .map(|c| {
            let min = c.blocks[0][0];
            base.blocks.iter().position(|b| b[0] == min).unwrap()
        })
        .collect();
    BlockSubset::new(base, selected)
}

fn check_bound(n: usize, max_n: usize) -> Result<()> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    if n > max_n {
        return domain(format!("n = {n} exceeds the enumeration bound {max_n}"));
    }
    Ok(())
}

type RawPartition = Vec<Vec<usize>>;

fn shift(p: &RawPartition, by: usize) -> RawPartition {
    p.iter().map(|b| b.iter().map(|x| x + by).collect()).collect()
}

/// NC(L) on `1..=L` for every `L <= n`, built bottom-up by choosing the
/// block of the first element and filling each gap independently.
fn nc_tables(n: usize) -> Vec<Vec<RawPartition>> {
    let mut table: Vec<Vec<RawPartition>> = vec![vec![vec![]]];
    for len in 1..=n {
        let all = first_block_expansions(len, &table, false);
        table.push(all);
    }
    table
}

/// Partitions of `1..=len` grouped by the block containing 1. When
/// `closed` is set, that block must also contain `len`.
fn first_block_expansions(len: usize, table: &[Vec<RawPartition>], closed: bool) -> Vec<RawPartition> {
    let mut out = Vec::new();
    extend_first_block(vec![1], vec![vec![]], len, table, closed, &mut out);
    for p in &mut out {
        p.sort_unstable_by_key(|b| b[0]);
    }
    out
}

fn extend_first_block(
    block: Vec<usize>,
    fills: Vec<RawPartition>,
    len: usize,
    table: &[Vec<RawPartition>],
    closed: bool,
    out: &mut Vec<RawPartition>,
) {
    let last = *block.last().unwrap();
    if !closed || last == len {
        let tail_len = len - last;
        for tail in &table[tail_len] {
            let tail = shift(tail, last);
            for fill in &fills {
                let mut p = Vec::with_capacity(1 + fill.len() + tail.len());
                p.push(block.clone());
                p.extend(fill.iter().cloned());
                p.extend(tail.iter().cloned());
                out.push(p);
            }
        }
    }
    for next in last + 1..=len {
        let gap = &table[next - last - 1];
        let mut new_fills = Vec::with_capacity(fills.len() * gap.len());
        for fill in &fills {
            for g in gap {
                let mut f = fill.clone();
                f.extend(shift(g, last));
                new_fills.push(f);
            }
        }
        let mut b = block.clone();
        b.push(next);
        extend_first_block(b, new_fills, len, table, closed, out);
    }
}

/// All non-crossing partitions of `{1..n}` in canonical form.
pub fn enumerate_nc(n: usize) -> Result<Vec<NCPartition>> {
    enumerate_nc_bounded(n, DEFAULT_MAX_N)
}

pub fn enumerate_nc_bounded(n: usize, max_n: usize) -> Result<Vec<NCPartition>> {
    check_bound(n, max_n)?;
    let mut table = nc_tables(n);
    Ok(table.pop().unwrap().into_iter().map(|blocks| NCPartition { blocks }).collect())
}

/// Irreducible non-crossing partitions of `{1..n}` (1 and n share a block).
pub fn enumerate_nc_irr(n: usize) -> Result<Vec<NCPartition>> {
    enumerate_nc_irr_bounded(n, DEFAULT_MAX_N)
}

pub fn enumerate_nc_irr_bounded(n: usize, max_n: usize) -> Result<Vec<NCPartition>> {
    check_bound(n, max_n)?;
    let table = nc_tables(n - 1);
    Ok(first_block_expansions(n, &table, true)
        .into_iter()
        .map(|blocks| NCPartition { blocks })
        .collect())
}

/// Irreducible monotone partitions of `{1..n}` with `k` blocks.
///
/// The block with the largest label is always an interval of the remaining
/// ground set avoiding both ends; peeling it off leaves an irreducible
/// monotone partition with `k - 1` blocks. Recursing over every such
/// interval produces each element exactly once.
pub fn enumerate_monotone_irr(n: usize, k: usize) -> Result<Vec<MonotonePartition>> {
    enumerate_monotone_irr_bounded(n, k, DEFAULT_MAX_N)
}

pub fn enumerate_monotone_irr_bounded(n: usize, k: usize, max_n: usize) -> Result<Vec<MonotonePartition>> {
    check_bound(n, max_n)?;
    if k == 0 {
        return domain("k must be at least 1");
    }
    let ground: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    for ordered in monotone_irr_on(&ground, k) {
        let base = NCPartition::canonical(ordered.clone());
        let labels = base
            .blocks
            .iter()
            .map(|b| ordered.iter().position(|o| o[0] == b[0]).unwrap() + 1)
            .collect();
        out.push(MonotonePartition { base, labels });
    }
    Ok(out)
}

fn monotone_irr_on(ground: &[usize], k: usize) -> Vec<Vec<Vec<usize>>> {
    if k == 1 {
        return vec![vec![ground.to_vec()]];
    }
    let len = ground.len();
    let mut out = Vec::new();
    if len < 3 {
        return out;
    }
    for start in 1..len - 1 {
        for end in start..len - 1 {
            // the remaining set must still hold k - 1 blocks
            if len - (end - start + 1) < k - 1 {
                continue;
            }
            let interval = ground[start..=end].to_vec();
            let rest: Vec<usize> = ground[..start].iter().chain(&ground[end + 1..]).copied().collect();
            for mut sub in monotone_irr_on(&rest, k - 1) {
                sub.push(interval.clone());
                out.push(sub);
            }
        }
    }
    out
}
