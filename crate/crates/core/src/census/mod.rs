//! Census enumeration of closed one-vertex triangulations.
//!
//! Enumeration runs in two stages. A face pairing graph records which
//! tetrahedra share faces: a connected 4-regular multigraph on the
//! tetrahedra, loops allowed and counting two toward the degree, taken up to
//! isomorphism. For each pairing graph a backtracking search assigns one of
//! the six candidate corner maps to every face pair, pruning branches that
//! can no longer close into a one-vertex 3-manifold; surviving
//! triangulations are deduplicated by canonical signature. The pairing graph
//! of a triangulation is an isomorphism invariant, so deduplication never
//! has to look across graphs and the per-graph searches are independent.
//!
//! The search keeps edge and vertex identification classes of the partial
//! gluing in union-find structures with an undo log. Three cuts preserve the
//! census exactly: an edge class identified with itself reversed can never
//! appear in a 3-manifold triangulation; each additional gluing merges at
//! most three edge classes and three vertex classes, and a closed one-vertex
//! complex on `n` tetrahedra has exactly `n + 1` edge classes, so a partial
//! gluing whose class counts are out of reach of those targets is dead.
//! [`PruneLevel::All`] adds the minimality cuts, which do change the output:
//! a closed edge class of degree at most 2 whose instances lie on pairwise
//! distinct tetrahedra is discarded, and at the leaves the spine predicates
//! of [`crate::spine`] run.
//!
//! [`brute_force_census`] is a second, much slower enumeration used to test
//! the first. It walks every perfect matching of the `4n` faces and every
//! corner map assignment, recomputes its pruning data from the bare gluings
//! at every step, and deduplicates by explicit isomorphism search instead of
//! signatures.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::homology::Fingerprint;
use crate::spine;
use crate::trig::directed_edge_index;
use crate::trig::Perm4;
use crate::trig::Triangulation;

/// A face pairing graph: nodes are tetrahedra, each edge is a face gluing.
///
/// Always 4-regular with loops counting two, and connected. Stored as the
/// upper triangle of the multiplicity matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingGraph {
    n: usize,
    mult: Vec<u8>,
}

fn tri_pos(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * (2 * n - i + 1) / 2 + (j - i)
}

impl PairingGraph {
    pub fn size(&self) -> usize {
        self.n
    }

    /// Number of face pairs between tetrahedra `i` and `j`; for `i == j`
    /// this counts loops, each of which uses two faces of the tetrahedron.
    pub fn multiplicity(&self, i: usize, j: usize) -> u8 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.mult[tri_pos(self.n, i, j)]
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut found = 1;
        while let Some(v) = stack.pop() {
            for u in 0..self.n {
                if !seen[u] && self.multiplicity(v, u) > 0 {
                    seen[u] = true;
                    found += 1;
                    stack.push(u);
                }
            }
        }
        found == self.n
    }

    /// The concrete face pairs `(tet, face, tet, face)` of this graph, with
    /// faces of each tetrahedron handed out in a fixed order: loops first,
    /// then edges by ascending endpoints. Which faces of a tetrahedron carry
    /// which pair is immaterial, since the gluing search tries every corner
    /// map and the output is deduplicated up to relabelling.
    pub fn face_pairs(&self) -> Vec<(usize, u8, usize, u8)> {
        let mut next = vec![0u8; self.n];
        let mut out = Vec::with_capacity(2 * self.n);
        for i in 0..self.n {
            for _ in 0..self.multiplicity(i, i) {
                out.push((i, next[i], i, next[i] + 1));
                next[i] += 2;
            }
        }
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                for _ in 0..self.multiplicity(i, j) {
                    let (fi, fj) = (next[i], next[j]);
                    next[i] += 1;
                    next[j] += 1;
                    out.push((i, fi, j, fj));
                }
            }
        }
        debug_assert!(next.iter().all(|&c| c == 4));
        out
    }

    /// Lexicographically least upper triangle over all node relabellings, a
    /// complete isomorphism invariant. Only relabellings preserving the
    /// per-node profile (loop count, sorted row) can realise the minimum, so
    /// the search runs over the profile classes instead of all `n!` orders.
    fn canonical_key(&self) -> Vec<u8> {
        let mut groups: BTreeMap<(u8, Vec<u8>), Vec<usize>> = BTreeMap::new();
        for v in 0..self.n {
            let mut row: Vec<u8> =
                (0..self.n).filter(|&u| u != v).map(|u| self.multiplicity(v, u)).collect();
            row.sort_unstable();
            groups.entry((self.multiplicity(v, v), row)).or_default().push(v);
        }
        let classes: Vec<Vec<usize>> = groups.into_values().collect();
        let class_of_pos: Vec<usize> = classes
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| core::iter::repeat(ci).take(c.len()))
            .collect();
        let mut taken: Vec<Vec<bool>> = classes.iter().map(|c| vec![false; c.len()]).collect();
        let mut order = vec![0usize; self.n];
        let mut best: Option<Vec<u8>> = None;
        self.min_key(&classes, &class_of_pos, &mut taken, &mut order, 0, &mut best);
        best.expect("at least one labelling")
    }

    fn min_key(
        &self,
        classes: &[Vec<usize>],
        class_of_pos: &[usize],
        taken: &mut [Vec<bool>],
        order: &mut [usize],
        pos: usize,
        best: &mut Option<Vec<u8>>,
    ) {
        if pos == self.n {
            let mut key = Vec::with_capacity(self.mult.len());
            for i in 0..self.n {
                for j in i..self.n {
                    key.push(self.multiplicity(order[i], order[j]));
                }
            }
            if best.as_ref().is_none_or(|b| key < *b) {
                *best = Some(key);
            }
            return;
        }
        let ci = class_of_pos[pos];
        for idx in 0..classes[ci].len() {
            if taken[ci][idx] {
                continue;
            }
            taken[ci][idx] = true;
            order[pos] = classes[ci][idx];
            self.min_key(classes, class_of_pos, taken, order, pos + 1, best);
            taken[ci][idx] = false;
        }
    }
}

/// All face pairing graphs on `n` tetrahedra up to isomorphism, in a
/// deterministic order.
pub fn face_pairing_graphs(n: usize) -> Vec<PairingGraph> {
    assert!(n >= 1);
    let positions: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut rd = vec![4u8; n];
    let mut mult = vec![0u8; positions.len()];
    let mut seen: BTreeMap<Vec<u8>, PairingGraph> = BTreeMap::new();
    grow_graphs(n, &positions, 0, &mut rd, &mut mult, &mut seen);
    seen.into_values().collect()
}

fn grow_graphs(
    n: usize,
    positions: &[(usize, usize)],
    k: usize,
    rd: &mut [u8],
    mult: &mut [u8],
    seen: &mut BTreeMap<Vec<u8>, PairingGraph>,
) {
    if k == positions.len() {
        debug_assert!(rd.iter().all(|&d| d == 0));
        let g = PairingGraph { n, mult: mult.to_vec() };
        if g.is_connected() {
            seen.entry(g.canonical_key()).or_insert(g);
        }
        return;
    }
    let (i, j) = positions[k];
    let cap = if i == j { rd[i] / 2 } else { rd[i].min(rd[j]) };
    for m in 0..=cap {
        if i == j {
            rd[i] -= 2 * m;
        } else {
            rd[i] -= m;
            rd[j] -= m;
        }
        mult[k] = m;
        let feasible = if j == n - 1 {
            // row complete: the degree of node i is settled
            rd[i] == 0
        } else {
            rd[i] as usize <= (j + 1..n).map(|u| rd[u] as usize).sum::<usize>()
        };
        if feasible {
            grow_graphs(n, positions, k + 1, rd, mult, seen);
        }
        mult[k] = 0;
        if i == j {
            rd[i] += 2 * m;
        } else {
            rd[i] += m;
            rd[j] += m;
        }
    }
}

/// How aggressively the census search discards triangulations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PruneLevel {
    /// Validity cuts only: the output is every closed one-vertex
    /// triangulation, up to isomorphism.
    None,
    /// Also the minimality cuts. Every discarded triangulation is certified
    /// to not be a minimal triangulation of its manifold, or to be a
    /// non-minimal spine shape of it.
    All,
}

/// Census search configuration.
#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    pub prune: PruneLevel,
    /// Keep only non-orientable triangulations.
    pub non_orientable_only: bool,
    /// Keep only triangulations with this exact fingerprint.
    pub fingerprint: Option<Fingerprint>,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { prune: PruneLevel::All, non_orientable_only: false, fingerprint: None }
    }
}

/// Every closed one-vertex triangulation on `n` tetrahedra passing the
/// filters, as sorted canonical signatures.
pub fn enumerate(n: usize, opts: &EnumerationOptions) -> Vec<String> {
    let mut sigs = BTreeSet::new();
    for g in face_pairing_graphs(n) {
        enumerate_pairing_into(&g, opts, &mut sigs);
    }
    sigs.into_iter().collect()
}

/// The part of the census coming from one face pairing graph, as sorted
/// canonical signatures. The full census is the disjoint union of these
/// over [`face_pairing_graphs`], in any order.
pub fn enumerate_pairing(g: &PairingGraph, opts: &EnumerationOptions) -> Vec<String> {
    let mut sigs = BTreeSet::new();
    enumerate_pairing_into(g, opts, &mut sigs);
    sigs.into_iter().collect()
}

fn enumerate_pairing_into(
    g: &PairingGraph,
    opts: &EnumerationOptions,
    out: &mut BTreeSet<String>,
) {
    let n = g.size();
    assert!(n <= 8, "edge tracker tetrahedron masks are eight bits wide");
    let mut pairs = g.face_pairs();
    order_pairs(&mut pairs);
    let mut search = Search {
        n,
        pairs,
        opts,
        t: Triangulation::new(n),
        edges: EdgeTracker::new(n),
        verts: VertTracker::new(n),
        out,
    };
    search.dfs(0);
}

/// Reorders face pairs so that each gluing touches a tetrahedron already
/// reached from tetrahedron 0, preferring pairs with both ends reached. The
/// edge and vertex class counts then drop as early as possible, which is
/// where the counting prunes get their power.
fn order_pairs(pairs: &mut Vec<(usize, u8, usize, u8)>) {
    let mut ordered = Vec::with_capacity(pairs.len());
    let mut used = vec![false; pairs.len()];
    let mut reached: u32 = 1;
    for _ in 0..pairs.len() {
        let mut pick = usize::MAX;
        let mut pick_score = -1i32;
        for (k, &(t1, _, t2, _)) in pairs.iter().enumerate() {
            if used[k] {
                continue;
            }
            let score = (reached >> t1 & 1) as i32 + (reached >> t2 & 1) as i32;
            if score > pick_score {
                pick = k;
                pick_score = score;
            }
            if pick_score == 2 {
                break;
            }
        }
        debug_assert!(pick_score >= 1, "pairing graphs are connected");
        used[pick] = true;
        let p = pairs[pick];
        reached |= 1 << p.0;
        reached |= 1 << p.2;
        ordered.push(p);
    }
    *pairs = ordered;
}

/// Union-find over directed edge instances with an undo log.
///
/// Slots are [`directed_edge_index`] values. Every class root carries the
/// number of undirected instances in the class, the number of still unglued
/// face slots among them (two per instance, one spent per side of each
/// gluing along the edge), a bitmask of the tetrahedra met, and whether some
/// tetrahedron carries two instances. The search unions mirror pairs
/// symmetrically, so the live directed class count is always twice the
/// undirected one.
struct EdgeTracker {
    parent: Vec<u32>,
    size: Vec<u32>,
    insts: Vec<u32>,
    open: Vec<u32>,
    mask: Vec<u8>,
    multi: Vec<bool>,
    live: u32,
    log: Vec<EdgeUndo>,
}

enum EdgeUndo {
    Union { child: u32, parent: u32, size: u32, insts: u32, open: u32, mask: u8, multi: bool },
    Spend { root: u32 },
}

impl EdgeTracker {
    fn new(n: usize) -> EdgeTracker {
        let slots = 16 * n;
        let mut tr = EdgeTracker {
            parent: (0..slots as u32).collect(),
            size: vec![1; slots],
            insts: vec![0; slots],
            open: vec![0; slots],
            mask: vec![0; slots],
            multi: vec![false; slots],
            live: 12 * n as u32,
            log: Vec::new(),
        };
        for t in 0..n {
            for a in 0..4u8 {
                for b in 0..4u8 {
                    if a != b {
                        let s = directed_edge_index(t, a, b);
                        tr.insts[s] = 1;
                        tr.open[s] = 2;
                        tr.mask[s] = 1 << t;
                    }
                }
            }
        }
        tr
    }

    fn find(&self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            core::mem::swap(&mut ra, &mut rb);
        }
        let (ru, cu) = (ra as usize, rb as usize);
        self.log.push(EdgeUndo::Union {
            child: rb,
            parent: ra,
            size: self.size[ru],
            insts: self.insts[ru],
            open: self.open[ru],
            mask: self.mask[ru],
            multi: self.multi[ru],
        });
        self.parent[cu] = ra;
        self.size[ru] += self.size[cu];
        self.insts[ru] += self.insts[cu];
        self.open[ru] += self.open[cu];
        self.multi[ru] = self.multi[ru] || self.multi[cu] || self.mask[ru] & self.mask[cu] != 0;
        self.mask[ru] |= self.mask[cu];
        self.live -= 1;
    }

    /// Consumes two face slots of the class of `x` and returns its root.
    fn spend_two(&mut self, x: u32) -> u32 {
        let r = self.find(x);
        self.log.push(EdgeUndo::Spend { root: r });
        self.open[r as usize] -= 2;
        r
    }

    fn rollback(&mut self, mark: usize) {
        while self.log.len() > mark {
            match self.log.pop().unwrap() {
                EdgeUndo::Union { child, parent, size, insts, open, mask, multi } => {
                    self.parent[child as usize] = child;
                    let p = parent as usize;
                    self.size[p] = size;
                    self.insts[p] = insts;
                    self.open[p] = open;
                    self.mask[p] = mask;
                    self.multi[p] = multi;
                    self.live += 1;
                }
                EdgeUndo::Spend { root } => {
                    self.open[root as usize] += 2;
                }
            }
        }
    }
}

/// Union-find over the `4n` corners with an undo log; only the class count
/// is needed.
struct VertTracker {
    parent: Vec<u32>,
    size: Vec<u32>,
    live: u32,
    log: Vec<(u32, u32, u32)>,
}

impl VertTracker {
    fn new(n: usize) -> VertTracker {
        VertTracker {
            parent: (0..4 * n as u32).collect(),
            size: vec![1; 4 * n],
            live: 4 * n as u32,
            log: Vec::new(),
        }
    }

    fn find(&self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.log.push((rb, ra, self.size[ra as usize]));
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        self.live -= 1;
    }

    fn rollback(&mut self, mark: usize) {
        while self.log.len() > mark {
            let (child, parent, size) = self.log.pop().unwrap();
            self.parent[child as usize] = child;
            self.size[parent as usize] = size;
            self.live += 1;
        }
    }
}

struct Search<'a> {
    n: usize,
    pairs: Vec<(usize, u8, usize, u8)>,
    opts: &'a EnumerationOptions,
    t: Triangulation,
    edges: EdgeTracker,
    verts: VertTracker,
    out: &'a mut BTreeSet<String>,
}

impl Search<'_> {
    fn dfs(&mut self, k: usize) {
        if k == self.pairs.len() {
            self.leaf();
            return;
        }
        let (t1, f1, t2, f2) = self.pairs[k];
        let rem = (self.pairs.len() - k - 1) as u32;
        for p in Perm4::sending(f1, f2) {
            let em = self.edges.log.len();
            let vm = self.verts.log.len();
            self.t.glue(t1, f1, t2, f2, p);
            if self.admit(t1, f1, t2, p, rem) {
                self.dfs(k + 1);
            }
            self.edges.rollback(em);
            self.verts.rollback(vm);
            self.t.unglue(t1, f1);
        }
    }

    /// Feeds one gluing to the trackers; false means the branch is dead.
    /// The caller rolls back in either case, so this may bail mid-update.
    fn admit(&mut self, t1: usize, f1: u8, t2: usize, p: Perm4, rem: u32) -> bool {
        let mut face_edges = [(0u8, 0u8); 3];
        let mut ne = 0;
        for a in 0..4u8 {
            for b in (a + 1)..4 {
                if a != f1 && b != f1 {
                    face_edges[ne] = (a, b);
                    ne += 1;
                }
            }
        }
        for &(a, b) in &face_edges {
            let (pa, pb) = (p.apply(a), p.apply(b));
            let d = |t: usize, x: u8, y: u8| directed_edge_index(t, x, y) as u32;
            self.edges.union(d(t1, a, b), d(t2, pa, pb));
            self.edges.union(d(t1, b, a), d(t2, pb, pa));
        }
        for &(a, b) in &face_edges {
            let fwd = directed_edge_index(t1, a, b) as u32;
            let bwd = directed_edge_index(t1, b, a) as u32;
            if self.edges.find(fwd) == self.edges.find(bwd) {
                // identified with itself reversed
                return false;
            }
            let r = self.edges.spend_two(fwd) as usize;
            self.edges.spend_two(bwd);
            if self.edges.open[r] == 0
                && self.opts.prune == PruneLevel::All
                && self.edges.insts[r] <= 2
                && !self.edges.multi[r]
            {
                // closed low degree edge spanning distinct tetrahedra
                return false;
            }
        }
        for a in 0..4u8 {
            if a != f1 {
                self.verts.union(4 * t1 as u32 + a as u32, 4 * t2 as u32 + p.apply(a) as u32);
            }
        }
        let undirected = self.edges.live / 2;
        let target = self.n as u32 + 1;
        if undirected < target || undirected > target + 3 * rem {
            return false;
        }
        if self.verts.live > 1 + 3 * rem {
            return false;
        }
        true
    }

    fn leaf(&mut self) {
        if self.verts.live != 1 {
            return;
        }
        if self.t.validate().is_err() {
            return;
        }
        if self.opts.non_orientable_only && self.t.is_orientable() {
            return;
        }
        if self.opts.prune == PruneLevel::All {
            if let Ok(flags) = spine::pruning_predicates(&self.t) {
                if flags.loop_edge
                    || flags.edge_hit_twice
                    || flags.small_embedded_face
                    || flags.forbidden_square
                {
                    return;
                }
            }
        }
        if let Some(want) = &self.opts.fingerprint {
            if &Fingerprint::of(&self.t) != want {
                return;
            }
        }
        self.out.insert(self.t.iso_sig());
    }
}

/// Reference census for tiny sizes: every closed connected one-vertex
/// triangulation on `n` tetrahedra, one representative per isomorphism
/// class.
///
/// Independent of the pairing graph machinery: it enumerates every perfect
/// matching of the `4n` faces with every corner map (interleaved, so the
/// first unglued face picks a later partner and a map, then recursion),
/// recomputes the class data it prunes on from the bare gluings at every
/// step, and deduplicates with [`Triangulation::is_isomorphic_to`] instead
/// of signatures.
///
/// Two kinds of branches are skipped, neither losing an isomorphism class.
/// The counting prunes never discard a state that could still become a
/// closed one-vertex 3-manifold. And when the chosen partner is a fresh
/// tetrahedron, one not yet touched by any gluing, the 24 corner
/// relabellings of that tetrahedron act freely on the choice of partner face
/// and corner map and permute fresh tetrahedra among themselves, so only the
/// smallest fresh index, face 0 and a single fixed map are tried.
/// Factorially slow all the same; `n <= 3` is fine.
pub fn brute_force_census(n: usize) -> Vec<Triangulation> {
    assert!(n >= 1);
    let mut t = Triangulation::new(n);
    let mut scratch = Scratch { edge: Vec::new(), vert: Vec::new() };
    let mut reps = Vec::new();
    search_faces(&mut t, 0, &mut scratch, &mut reps);
    reps
}

fn search_faces(
    t: &mut Triangulation,
    depth: usize,
    scratch: &mut Scratch,
    reps: &mut Vec<Triangulation>,
) {
    let n = t.size();
    let mut open = None;
    'scan: for t1 in 0..n {
        for f1 in 0..4u8 {
            if t.gluing(t1, f1).is_none() {
                open = Some((t1, f1));
                break 'scan;
            }
        }
    }
    let Some((t1, f1)) = open else {
        if t.vertex_classes().count == 1
            && t.validate().is_ok()
            && !reps.iter().any(|r| r.is_isomorphic_to(t))
        {
            reps.push(t.clone());
        }
        return;
    };
    let fresh: Vec<bool> =
        (0..n).map(|tet| (0..4u8).all(|f| t.gluing(tet, f).is_none())).collect();
    let smallest_fresh = ((t1 + 1)..n).find(|&tet| fresh[tet]);
    // a fresh t1 is only ever the start of a new connected piece, so its
    // corner labels are free too: a loop gluing may fix the partner face
    let t1_fresh = f1 == 0 && fresh[t1];
    let rem = 2 * n - depth - 1;
    for t2 in t1..n {
        let t2_fresh = t2 != t1 && fresh[t2];
        if t2_fresh && Some(t2) != smallest_fresh {
            continue;
        }
        for f2 in 0..4u8 {
            if (t2, f2) <= (t1, f1) || t.gluing(t2, f2).is_some() {
                continue;
            }
            if t2_fresh && f2 != 0 {
                continue;
            }
            if t2 == t1 && t1_fresh && f2 != 1 {
                continue;
            }
            for p in Perm4::sending(f1, f2) {
                t.glue(t1, f1, t2, f2, p);
                if let Some((ec, vc)) = recount(t, scratch) {
                    if ec >= n + 1 && ec <= n + 1 + 3 * rem && vc <= 1 + 3 * rem {
                        search_faces(t, depth + 1, scratch, reps);
                    }
                }
                t.unglue(t1, f1);
                if t2_fresh {
                    break;
                }
            }
        }
    }
}

/// Flat union-find pair reused across [`search_faces`] steps; the contents
/// are rebuilt from the triangulation every call, never updated in place.
struct Scratch {
    edge: Vec<u32>,
    vert: Vec<u32>,
}

fn scratch_find(parent: &[u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        x = parent[x as usize];
    }
    x
}

fn scratch_union(parent: &mut [u32], a: u32, b: u32) {
    let ra = scratch_find(parent, a);
    let rb = scratch_find(parent, b);
    if ra != rb {
        parent[rb as usize] = ra;
    }
}

/// Recomputes the undirected edge class count and the vertex class count of
/// a partial gluing, or `None` when some edge is identified with itself
/// reversed.
fn recount(t: &Triangulation, scratch: &mut Scratch) -> Option<(usize, usize)> {
    let n = t.size();
    scratch.edge.clear();
    scratch.edge.extend(0..16 * n as u32);
    scratch.vert.clear();
    scratch.vert.extend(0..4 * n as u32);
    for t1 in 0..n {
        for f1 in 0..4u8 {
            let Some(g) = t.gluing(t1, f1) else { continue };
            if (g.tet, g.face) < (t1, f1) {
                continue;
            }
            for a in 0..4u8 {
                if a == f1 {
                    continue;
                }
                scratch_union(
                    &mut scratch.vert,
                    4 * t1 as u32 + a as u32,
                    4 * g.tet as u32 + g.perm.apply(a) as u32,
                );
                for b in (a + 1)..4 {
                    if b == f1 {
                        continue;
                    }
                    let (pa, pb) = (g.perm.apply(a), g.perm.apply(b));
                    scratch_union(
                        &mut scratch.edge,
                        directed_edge_index(t1, a, b) as u32,
                        directed_edge_index(g.tet, pa, pb) as u32,
                    );
                    scratch_union(
                        &mut scratch.edge,
                        directed_edge_index(t1, b, a) as u32,
                        directed_edge_index(g.tet, pb, pa) as u32,
                    );
                }
            }
        }
    }
    let mut directed = 0;
    for t1 in 0..n {
        for a in 0..4u8 {
            for b in 0..4u8 {
                if a == b {
                    continue;
                }
                let s = directed_edge_index(t1, a, b);
                if scratch.edge[s] == s as u32 {
                    directed += 1;
                }
                if a < b {
                    let fwd = scratch_find(&scratch.edge, s as u32);
                    let bwd =
                        scratch_find(&scratch.edge, directed_edge_index(t1, b, a) as u32);
                    if fwd == bwd {
                        return None;
                    }
                }
            }
        }
    }
    let verts = (0..4 * n).filter(|&c| scratch.vert[c] == c as u32).count();
    Some((directed / 2, verts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unpruned() -> EnumerationOptions {
        EnumerationOptions {
            prune: PruneLevel::None,
            non_orientable_only: false,
            fingerprint: None,
        }
    }

    #[test]
    fn pairing_graph_counts_match_the_known_sequence() {
        // connected 4-regular multigraphs with loops, up to isomorphism
        let want = [1usize, 2, 4, 10, 28, 97];
        for (i, &w) in want.iter().enumerate() {
            assert_eq!(face_pairing_graphs(i + 1).len(), w, "n = {}", i + 1);
        }
    }

    #[test]
    fn face_pairs_cover_every_face_once() {
        for g in face_pairing_graphs(4) {
            let mut seen = BTreeSet::new();
            for (t1, f1, t2, f2) in g.face_pairs() {
                assert!(seen.insert((t1, f1)));
                assert!(seen.insert((t2, f2)));
            }
            assert_eq!(seen.len(), 16);
        }
    }

    #[test]
    fn census_matches_brute_force_n1() {
        census_matches_brute_force(1);
    }

    #[test]
    fn census_matches_brute_force_n2() {
        census_matches_brute_force(2);
    }

    #[test]
    fn census_matches_brute_force_n3() {
        census_matches_brute_force(3);
    }

    fn census_matches_brute_force(n: usize) {
        let fast = enumerate(n, &unpruned());
        let mut slow: Vec<String> =
            brute_force_census(n).iter().map(|t| t.iso_sig()).collect();
        slow.sort();
        assert_eq!(fast, slow, "n = {n}");
    }

    #[test]
    fn pruned_census_is_a_subset_of_the_unpruned_one() {
        let all: BTreeSet<String> = enumerate(3, &unpruned()).into_iter().collect();
        let pruned = enumerate(3, &EnumerationOptions::default());
        assert!(!all.is_empty());
        assert!(pruned.iter().all(|s| all.contains(s)));
    }

    #[test]
    fn enumeration_is_independent_of_pairing_order() {
        let forward = enumerate(3, &unpruned());
        let mut sigs = BTreeSet::new();
        for g in face_pairing_graphs(3).into_iter().rev() {
            for s in enumerate_pairing(&g, &unpruned()) {
                assert!(sigs.insert(s), "pairing graphs share a triangulation");
            }
        }
        let merged: Vec<String> = sigs.into_iter().collect();
        assert_eq!(forward, merged);
    }

    #[test]
    fn orientability_filter_selects_exactly_the_non_orientable_part() {
        let opts = EnumerationOptions { non_orientable_only: true, ..unpruned() };
        let filtered = enumerate(3, &opts);
        let all = enumerate(3, &unpruned());
        let check: Vec<String> = all
            .into_iter()
            .filter(|s| !Triangulation::from_iso_sig(s).unwrap().is_orientable())
            .collect();
        assert_eq!(filtered, check);
    }

    #[test]
    fn fingerprint_filter_agrees_with_recomputation() {
        let all = enumerate(2, &unpruned());
        let probe = Fingerprint::of(&Triangulation::from_iso_sig(&all[0]).unwrap());
        let opts = EnumerationOptions { fingerprint: Some(probe.clone()), ..unpruned() };
        let filtered = enumerate(2, &opts);
        let check: Vec<String> = all
            .into_iter()
            .filter(|s| Fingerprint::of(&Triangulation::from_iso_sig(s).unwrap()) == probe)
            .collect();
        assert_eq!(filtered, check);
        assert!(!filtered.is_empty());
    }
}

#[cfg(test)]
mod timing_probe {
    use super::*;

    #[test]
    #[ignore]
    fn census_scaling() {
        for n in 4..=6 {
            let t0 = std::time::Instant::now();
            let opts = EnumerationOptions {
                prune: PruneLevel::All,
                non_orientable_only: true,
                fingerprint: None,
            };
            let sigs = enumerate(n, &opts);
            std::println!("n={} pruned non-orientable: {} sigs in {:?}", n, sigs.len(), t0.elapsed());
        }
    }
}
