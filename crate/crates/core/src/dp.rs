//! Longest-path dynamic program over a nice tree decomposition.
//!
//! A configuration describes how the partial path fragments chosen so far
//! meet the current bag. Every bag vertex is `OFF` (no chosen edge yet),
//! `MID` (two chosen edges) or an `END` of a fragment; an `END` records the
//! bag vertex at the other end of its fragment, or `EXT` when that end has
//! already been forgotten. Forgotten vertices of degree one are endpoints of
//! the final path and are counted in `externals_used`, which may not exceed
//! two; this alone forces a single path at the root.
//!
//! Each edge `{a, b}` is consumed at the `Forget` node of whichever endpoint
//! is forgotten first, so no edge is ever counted twice. Configurations are
//! packed into a `u64`: four bits per bag slot (`0` OFF, `1` MID, `2` EXT,
//! `3 + j` paired with slot `j`) and `externals_used` in bits 60..62, which
//! limits bags to 13 vertices.

use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::decomposition::{NiceTreeDecomposition, NodeKind};
use crate::graph::Graph;
use crate::path::Path;

pub const MAX_BAG: usize = 13;
/// Upper bound on the table size of any node when the width is at most two.
pub const WIDTH_TWO_TABLE_LIMIT: usize = 200;

const OFF: u8 = 0;
const MID: u8 = 1;
const EXT: u8 = 2;
const EXT_SHIFT: u32 = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DpError {
    #[error("bag of {0} vertices exceeds the supported maximum of {MAX_BAG}")]
    BagTooLarge(usize),
    #[error("decomposition does not match the graph")]
    Mismatch,
    #[error("the longest path has length 0")]
    NoEdges,
}

#[derive(Clone, Copy)]
struct Cfg {
    st: [u8; MAX_BAG],
    ext: u8,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum End {
    Slot(usize),
    Ext,
}

impl Cfg {
    fn decode(c: u64) -> Cfg {
        let mut st = [0u8; MAX_BAG];
        for (i, s) in st.iter_mut().enumerate() {
            *s = ((c >> (4 * i)) & 0xF) as u8;
        }
        Cfg { st, ext: ((c >> EXT_SHIFT) & 0x3) as u8 }
    }

    fn encode(&self) -> u64 {
        let mut c = (self.ext as u64) << EXT_SHIFT;
        for (i, &s) in self.st.iter().enumerate() {
            c |= (s as u64) << (4 * i);
        }
        c
    }

    fn degree(&self, i: usize) -> u8 {
        match self.st[i] {
            OFF => 0,
            MID => 2,
            _ => 1,
        }
    }

    /// The other end of the fragment ending at `i` (itself when `OFF`).
    fn other_end(&self, i: usize) -> End {
        match self.st[i] {
            OFF => End::Slot(i),
            EXT => End::Ext,
            s => End::Slot((s - 3) as usize),
        }
    }

    fn point(&mut self, from: End, to: End) {
        if let End::Slot(x) = from {
            self.st[x] = match to {
                End::Slot(y) => 3 + y as u8,
                End::Ext => EXT,
            };
        }
    }

    fn add_edge(&mut self, a: usize, b: usize) -> bool {
        if self.st[a] == MID || self.st[b] == MID {
            return false;
        }
        let (pa, pb) = (self.other_end(a), self.other_end(b));
        if pa == End::Slot(b) {
            return false; // closes a cycle
        }
        for x in [a, b] {
            if self.st[x] != OFF {
                self.st[x] = MID;
            }
        }
        self.point(pa, pb);
        self.point(pb, pa);
        self.consistent()
    }

    /// Removes slot `pos`, shifting later slots down.
    fn remove_slot(&mut self, pos: usize) {
        for i in pos..MAX_BAG - 1 {
            self.st[i] = self.st[i + 1];
        }
        self.st[MAX_BAG - 1] = OFF;
        for s in self.st.iter_mut() {
            if *s >= 3 && (*s - 3) as usize > pos {
                *s -= 1;
            }
        }
    }

    fn forget(&mut self, pos: usize) -> bool {
        if self.degree(pos) == 1 {
            if self.ext == 2 {
                return false;
            }
            self.ext += 1;
            let other = self.other_end(pos);
            self.point(other, End::Ext);
        }
        self.remove_slot(pos);
        self.consistent()
    }

    /// With both external slots spent and no fragment waiting on them, the
    /// path is finished and no bag vertex may be a fragment end.
    fn consistent(&self) -> bool {
        if self.ext < 2 || self.st.contains(&EXT) {
            return true;
        }
        self.st.iter().all(|&s| s == OFF || s == MID)
    }
}

fn introduce(c: u64, pos: usize) -> u64 {
    let mut cfg = Cfg::decode(c);
    for i in (pos + 1..MAX_BAG).rev() {
        cfg.st[i] = cfg.st[i - 1];
    }
    cfg.st[pos] = OFF;
    for s in cfg.st.iter_mut() {
        if *s >= 3 && (*s - 3) as usize >= pos {
            *s += 1;
        }
    }
    cfg.encode()
}

fn forget_with_edges(c: u64, pos: usize, mask: u32, len: usize) -> Option<u64> {
    let mut cfg = Cfg::decode(c);
    for b in 0..len {
        if mask >> b & 1 == 1 && !cfg.add_edge(pos, b) {
            return None;
        }
    }
    cfg.forget(pos).then(|| cfg.encode())
}

fn join(c1: u64, c2: u64, len: usize) -> Option<u64> {
    let (x, y) = (Cfg::decode(c1), Cfg::decode(c2));
    let ext = x.ext + y.ext;
    if ext > 2 {
        return None;
    }
    let mut deg = [0u8; MAX_BAG];
    for i in 0..len {
        deg[i] = x.degree(i) + y.degree(i);
        if deg[i] > 2 {
            return None;
        }
    }
    // cycle check on the links between bag slots
    let mut uf: [usize; MAX_BAG] = std::array::from_fn(|i| i);
    fn find(uf: &mut [usize; MAX_BAG], mut a: usize) -> usize {
        while uf[a] != a {
            a = uf[a];
        }
        a
    }
    for cfg in [&x, &y] {
        for i in 0..len {
            let j = cfg.st[i] as usize;
            if j >= 3 && i < j - 3 {
                let (ri, rj) = (find(&mut uf, i), find(&mut uf, j - 3));
                if ri == rj {
                    return None;
                }
                uf[ri] = rj;
            }
        }
    }
    let children = [&x, &y];
    let mut out = Cfg { st: [OFF; MAX_BAG], ext };
    for i in 0..len {
        out.st[i] = match deg[i] {
            0 => OFF,
            2 => MID,
            _ => {
                // walk the merged fragment to its other end
                let mut via = if x.degree(i) == 1 { 0 } else { 1 };
                let mut cur = i;
                loop {
                    match children[via].other_end(cur) {
                        End::Ext => break EXT,
                        End::Slot(next) => {
                            if deg[next] == 1 {
                                break 3 + next as u8;
                            }
                            cur = next;
                            via = 1 - via;
                        }
                    }
                }
            }
        };
    }
    out.consistent().then(|| out.encode())
}

/// Slots with at least one chosen edge, slots with two, and the number of
/// spent external slots; used to skip join pairs that cannot combine.
fn degree_masks(c: u64, len: usize) -> (u16, u16, u8) {
    let (mut touched, mut full) = (0u16, 0u16);
    for i in 0..len {
        let s = (c >> (4 * i)) & 0xF;
        if s != OFF as u64 {
            touched |= 1 << i;
        }
        if s == MID as u64 {
            full |= 1 << i;
        }
    }
    (touched, full, ((c >> EXT_SHIFT) & 0x3) as u8)
}

/// Checks the structural invariants of a packed configuration.
fn well_formed(c: u64, len: usize) -> bool {
    let cfg = Cfg::decode(c);
    if cfg.ext > 2 || cfg.st[len..].iter().any(|&s| s != OFF) {
        return false;
    }
    let mut ext_tags = 0;
    for i in 0..len {
        match cfg.st[i] {
            OFF | MID => {}
            EXT => ext_tags += 1,
            s => {
                let j = (s - 3) as usize;
                if j >= len || j == i || cfg.st[j] != 3 + i as u8 {
                    return false;
                }
            }
        }
    }
    ext_tags <= cfg.ext && cfg.consistent()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotState {
    Off,
    Mid,
    EndExternal,
    EndPaired(usize),
}

/// Decoded configuration over the bag vertices of a node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathConfiguration {
    pub bag: Vec<usize>,
    pub states: Vec<SlotState>,
    pub externals_used: u8,
}

impl PathConfiguration {
    fn decode(c: u64, bag: &[usize]) -> PathConfiguration {
        let cfg = Cfg::decode(c);
        let states = (0..bag.len())
            .map(|i| match cfg.st[i] {
                OFF => SlotState::Off,
                MID => SlotState::Mid,
                EXT => SlotState::EndExternal,
                s => SlotState::EndPaired(bag[(s - 3) as usize]),
            })
            .collect();
        PathConfiguration { bag: bag.to_vec(), states, externals_used: cfg.ext }
    }

    pub fn state_of(&self, v: usize) -> Option<SlotState> {
        self.bag.iter().position(|&x| x == v).map(|i| self.states[i])
    }
}

/// An optimal predecessor of a table entry: the child entry, plus the
/// edge mask for forget nodes or the right child entry for joins.
#[derive(Debug, Clone, Copy)]
struct Back {
    child: u32,
    other: u32,
}

/// Tables of every node in one flat arena. Entry `i` of node `u` lives at
/// `node_start[u] + i`; its optimal predecessors are
/// `backs[back_start[e]..back_start[e + 1]]`.
pub struct DpTable<'a> {
    ntd: &'a NiceTreeDecomposition,
    node_start: Vec<u32>,
    configs: Vec<u64>,
    values: Vec<i32>,
    back_start: Vec<u32>,
    backs: Vec<Back>,
    final_entry: u32,
    length: usize,
}

#[derive(Default)]
struct Memo {
    forget: FxHashMap<u128, Option<u64>>,
    join: FxHashMap<u128, Option<u64>>,
}

/// Fills the tables bottom-up. Nodes are processed in index order, which
/// the decomposition guarantees to be children-first.
pub fn run_forward_dp<'a>(ntd: &'a NiceTreeDecomposition, g: &Graph) -> Result<DpTable<'a>, DpError> {
    if let Some(big) = ntd.nodes.iter().map(|x| x.bag.len()).find(|&l| l > MAX_BAG) {
        return Err(DpError::BagTooLarge(big));
    }
    if ntd.nodes.iter().flat_map(|x| &x.bag).any(|&v| v >= g.n())
        || ntd.nodes.iter().enumerate().any(|(i, x)| x.children.indices().any(|c| c >= i))
    {
        return Err(DpError::Mismatch);
    }
    let width_two = ntd.width() <= 2;
    let mut memo = Memo::default();
    let mut t = DpTable {
        ntd,
        node_start: vec![0],
        configs: Vec::new(),
        values: Vec::new(),
        back_start: Vec::new(),
        backs: Vec::new(),
        final_entry: 0,
        length: 0,
    };
    let mut index: FxHashMap<u64, u32> = FxHashMap::default();
    let mut local_cfg: Vec<u64> = Vec::new();
    let mut local_val: Vec<i32> = Vec::new();
    let mut cands: Vec<(u32, i32, Back)> = Vec::new();

    for (u, node) in ntd.nodes.iter().enumerate() {
        index.clear();
        local_cfg.clear();
        local_val.clear();
        cands.clear();
        let mut offer = |c: u64, value: i32, back: Back| {
            debug_assert!(well_formed(c, node.bag.len()));
            let slot = *index.entry(c).or_insert_with(|| {
                local_cfg.push(c);
                local_val.push(i32::MIN);
                (local_cfg.len() - 1) as u32
            });
            let best = &mut local_val[slot as usize];
            if value >= *best {
                *best = value;
                cands.push((slot, value, back));
            }
        };
        match node.kind {
            NodeKind::Leaf => offer(0, 0, Back { child: u32::MAX, other: 0 }),
            NodeKind::Introduce(v) => {
                let pos = node.bag.binary_search(&v).map_err(|_| DpError::Mismatch)?;
                for e in t.entries(node.children.get(0)) {
                    offer(introduce(t.configs[e], pos), t.values[e], Back { child: e as u32, other: 0 });
                }
            }
            NodeKind::Forget(v) => {
                let child_bag = &ntd.nodes[node.children.get(0)].bag;
                let pos = child_bag.binary_search(&v).map_err(|_| DpError::Mismatch)?;
                let mut nbr_mask = 0u32;
                for (i, &b) in child_bag.iter().enumerate() {
                    if g.has_edge(v, b) {
                        nbr_mask |= 1 << i;
                    }
                }
                for e in t.entries(node.children.get(0)) {
                    let c = t.configs[e];
                    let mut sub = nbr_mask;
                    loop {
                        let key = c as u128 | (pos as u128) << 64 | (sub as u128) << 72;
                        let next = *memo
                            .forget
                            .entry(key)
                            .or_insert_with(|| forget_with_edges(c, pos, sub, child_bag.len()));
                        if let Some(nc) = next {
                            let value = t.values[e] + sub.count_ones() as i32;
                            offer(nc, value, Back { child: e as u32, other: sub });
                        }
                        if sub == 0 {
                            break;
                        }
                        sub = (sub - 1) & nbr_mask;
                    }
                }
            }
            NodeKind::Join => {
                let len = node.bag.len();
                let (l, r) = (node.children.get(0), node.children.get(1));
                let right: Vec<(usize, u16, u16, u8)> = t
                    .entries(r)
                    .map(|b| {
                        let (touched, full, ext) = degree_masks(t.configs[b], len);
                        (b, touched, full, ext)
                    })
                    .collect();
                for a in t.entries(l) {
                    let (ta, fa, ea) = degree_masks(t.configs[a], len);
                    for &(b, tb, fb, eb) in &right {
                        if ea + eb > 2 || fa & tb != 0 || ta & fb != 0 {
                            continue;
                        }
                        let key = (t.configs[a] as u128) << 64 | t.configs[b] as u128;
                        let next = *memo
                            .join
                            .entry(key)
                            .or_insert_with(|| join(t.configs[a], t.configs[b], len));
                        if let Some(nc) = next {
                            offer(nc, t.values[a] + t.values[b], Back { child: a as u32, other: b as u32 });
                        }
                    }
                }
            }
        }
        if width_two {
            assert!(
                local_cfg.len() <= WIDTH_TWO_TABLE_LIMIT,
                "node {u} holds {} configurations",
                local_cfg.len()
            );
        }
        // keep only the optimal predecessors, grouped by entry
        cands.retain(|&(slot, value, _)| value == local_val[slot as usize]);
        cands.sort_by_key(|&(slot, _, _)| slot);
        let base = t.backs.len();
        let mut k = 0;
        for slot in 0..local_cfg.len() {
            t.configs.push(local_cfg[slot]);
            t.values.push(local_val[slot]);
            t.back_start.push((base + k) as u32);
            while k < cands.len() && cands[k].0 as usize == slot {
                t.backs.push(cands[k].2);
                k += 1;
            }
        }
        t.node_start.push(t.configs.len() as u32);
    }
    t.back_start.push(t.backs.len() as u32);

    let finished = 2u64 << EXT_SHIFT;
    let root = t.entries(ntd.root);
    match root.clone().find(|&e| t.configs[e] == finished) {
        Some(e) => {
            t.final_entry = e as u32;
            t.length = t.values[e] as usize;
        }
        None => {
            // no edge at all: the empty configuration is the only one left
            t.final_entry = root.start as u32;
            t.length = 0;
        }
    }
    Ok(t)
}

impl<'a> DpTable<'a> {
    fn entries(&self, node: usize) -> std::ops::Range<usize> {
        self.node_start[node] as usize..self.node_start[node + 1] as usize
    }

    fn backs_of(&self, e: usize) -> &[Back] {
        &self.backs[self.back_start[e] as usize..self.back_start[e + 1] as usize]
    }

    pub fn decomposition(&self) -> &'a NiceTreeDecomposition {
        self.ntd
    }

    pub fn longest_path_length(&self) -> usize {
        self.length
    }

    /// Number of configurations stored at every node.
    pub fn table_sizes(&self) -> Vec<usize> {
        (0..self.ntd.len()).map(|u| self.entries(u).len()).collect()
    }

    /// The table of `node` as decoded configurations and their values.
    pub fn table(&self, node: usize) -> Vec<(PathConfiguration, i32)> {
        let bag = &self.ntd.nodes[node].bag;
        self.entries(node)
            .map(|e| (PathConfiguration::decode(self.configs[e], bag), self.values[e]))
            .collect()
    }

    /// Edges chosen at a forget node by the predecessor `back`.
    fn edges_of(&self, node: usize, back: Back) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = &self.ntd.nodes[node];
        let (v, child_bag) = match n.kind {
            NodeKind::Forget(v) => (v, &self.ntd.nodes[n.children.get(0)].bag),
            _ => (usize::MAX, &n.bag),
        };
        let mask = if v == usize::MAX { 0 } else { back.other };
        child_bag
            .iter()
            .enumerate()
            .filter(move |&(i, _)| mask >> i & 1 == 1)
            .map(move |(_, &b)| (v.min(b), v.max(b)))
    }

    /// Children of `(node, entry)` along predecessor `back`.
    fn descend(&self, node: usize, back: Back) -> Vec<(usize, usize)> {
        let n = &self.ntd.nodes[node];
        match n.kind {
            NodeKind::Leaf => Vec::new(),
            NodeKind::Introduce(_) | NodeKind::Forget(_) => vec![(n.children.get(0), back.child as usize)],
            NodeKind::Join => vec![
                (n.children.get(0), back.child as usize),
                (n.children.get(1), back.other as usize),
            ],
        }
    }
}

pub fn longest_path_length(dp: &DpTable<'_>) -> usize {
    dp.longest_path_length()
}

/// Follows the first optimal predecessor everywhere and assembles the
/// chosen edges into a path.
pub fn extract_longest_path(dp: &DpTable<'_>, g: &Graph) -> Result<Path, DpError> {
    if dp.length == 0 {
        return Err(DpError::NoEdges);
    }
    let mut edges = Vec::with_capacity(dp.length);
    let mut stack = vec![(dp.ntd.root, dp.final_entry as usize)];
    while let Some((node, e)) = stack.pop() {
        if let Some(&back) = dp.backs_of(e).first() {
            edges.extend(dp.edges_of(node, back));
            stack.extend(dp.descend(node, back));
        }
    }
    let path = path_from_edges(g.n(), &edges).ok_or(DpError::Mismatch)?;
    debug_assert!(path.is_valid_in(g) && path.len() == dp.length);
    Ok(path)
}

/// Orders an edge set forming a single simple path.
pub(crate) fn path_from_edges(n: usize, edges: &[(usize, usize)]) -> Option<Path> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let start = (0..n).find(|&v| adj[v].len() == 1)?;
    let mut seq = vec![start];
    let (mut prev, mut cur) = (usize::MAX, start);
    loop {
        let next = adj[cur].iter().copied().find(|&w| w != prev);
        match next {
            Some(w) => {
                seq.push(w);
                prev = cur;
                cur = w;
            }
            None => break,
        }
        if seq.len() > edges.len() + 1 {
            return None;
        }
    }
    (seq.len() == edges.len() + 1).then(|| Path::new(seq).ok()).flatten()
}

/// Entries lying on at least one realization of a longest path.
pub struct Marking {
    marked: Vec<bool>,
}

impl Marking {
    pub fn is_marked(&self, dp: &DpTable<'_>, node: usize, config: &PathConfiguration) -> bool {
        dp.entries(node).any(|e| {
            self.marked[e] && PathConfiguration::decode(dp.configs[e], &dp.ntd.nodes[node].bag) == *config
        })
    }

    pub fn marked_configs(&self, dp: &DpTable<'_>, node: usize) -> Vec<PathConfiguration> {
        let bag = &dp.ntd.nodes[node].bag;
        dp.entries(node)
            .filter(|&e| self.marked[e])
            .map(|e| PathConfiguration::decode(dp.configs[e], bag))
            .collect()
    }

    pub fn marked_count(&self) -> usize {
        self.marked.iter().filter(|&&m| m).count()
    }
}

/// Top-down marking through every optimal predecessor, starting from the
/// finished root configuration.
pub fn mark_contributing_configs(dp: &DpTable<'_>) -> Marking {
    let mut marked = vec![false; dp.configs.len()];
    marked[dp.final_entry as usize] = true;
    for node in (0..dp.ntd.len()).rev() {
        for e in dp.entries(node) {
            if !marked[e] {
                continue;
            }
            for &back in dp.backs_of(e) {
                for (_, child_entry) in dp.descend(node, back) {
                    marked[child_entry] = true;
                }
            }
        }
    }
    Marking { marked }
}

/// Vertices `v` such that no marked predecessor at `Forget(v)` leaves `v`
/// with no path edge. These are exactly the vertices on every longest path.
pub fn vertices_on_every_realization(dp: &DpTable<'_>, marking: &Marking, n: usize) -> Vec<usize> {
    let mut on_every = vec![false; n];
    for (node, x) in dp.ntd.nodes.iter().enumerate() {
        let NodeKind::Forget(v) = x.kind else { continue };
        let child = x.children.get(0);
        let pos = dp.ntd.nodes[child].bag.binary_search(&v).expect("forgotten vertex in child bag");
        on_every[v] = !dp.entries(node).any(|e| {
            marking.marked[e]
                && dp.backs_of(e).iter().any(|back| {
                    back.other == 0 && Cfg::decode(dp.configs[back.child as usize]).st[pos] == OFF
                })
        });
    }
    (0..n).filter(|&v| on_every[v]).collect()
}
