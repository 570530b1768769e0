//! Generalised triangulations of closed 3-manifolds.
//!
//! A triangulation is a set of abstract tetrahedra with faces glued in pairs
//! by affine maps, encoded as permutations of the four corner labels. The
//! face opposite corner `f` is face `f`; a gluing of face `f` of tetrahedron
//! `t` to face `f'` of `t'` is a `Perm4` sending corner labels of `t` to
//! corner labels of `t'` with `f -> f'`.
//!
//! The functions here compute the combinatorial skeleton: vertex, edge and
//! face identifications, link Euler characteristics, orientability, and the
//! orientation double cover.

pub mod bundle;
pub mod isosig;
pub mod perm;
pub mod text;

use alloc::vec;
use alloc::vec::Vec;

pub use perm::Perm4;

/// One side of a face identification: the target face and the corner map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub tet: usize,
    pub face: u8,
    pub perm: Perm4,
}

/// A generalised triangulation; faces may be left unglued while building.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    n: usize,
    gluings: Vec<Option<Gluing>>,
}

/// Why a triangulation fails to be a closed 3-manifold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Defect {
    /// Face `(tet, face)` has no partner.
    OpenFace { tet: usize, face: u8 },
    /// A gluing whose partner does not point back with the inverse map.
    BrokenInvolution { tet: usize, face: u8 },
    /// A gluing does not send its face label to the partner face label.
    BadFaceLabel { tet: usize, face: u8 },
    /// Face `(tet, face)` is glued to itself.
    SelfGluedFace { tet: usize, face: u8 },
    /// The tetrahedra do not form a single connected complex.
    Disconnected,
    /// An edge is identified with itself reversing direction.
    ReversedEdge { tet: usize, ends: (u8, u8) },
    /// A vertex whose link is not a 2-sphere.
    BadVertexLink { class: usize, euler: i64 },
}

impl core::fmt::Display for Defect {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Defect::OpenFace { tet, face } => write!(f, "face {tet}.{face} is unglued"),
            Defect::BrokenInvolution { tet, face } => {
                write!(f, "gluing of face {tet}.{face} is not matched by its partner")
            }
            Defect::BadFaceLabel { tet, face } => {
                write!(f, "gluing of face {tet}.{face} does not map the face to the partner face")
            }
            Defect::SelfGluedFace { tet, face } => {
                write!(f, "face {tet}.{face} is glued to itself")
            }
            Defect::Disconnected => write!(f, "the complex is not connected"),
            Defect::ReversedEdge { tet, ends } => {
                write!(f, "edge {}{} of tetrahedron {} is identified with itself reversed", ends.0, ends.1, tet)
            }
            Defect::BadVertexLink { class, euler } => {
                write!(f, "vertex {class} has link of Euler characteristic {euler}")
            }
        }
    }
}

impl core::error::Error for Defect {}

/// Corner identification classes; corners are indexed `4*tet + corner`.
#[derive(Clone, Debug)]
pub struct VertexClasses {
    pub class_of: Vec<u32>,
    pub count: usize,
}

/// Edge identification classes.
///
/// Directed edges are indexed `16*tet + 4*from + to` with `from != to`;
/// unused slots hold `u32::MAX`. An undirected class is reversed when its two
/// directions fall in one directed class.
#[derive(Clone, Debug)]
pub struct EdgeClasses {
    pub directed_of: Vec<u32>,
    pub directed_count: usize,
    pub class_of: Vec<u32>,
    pub count: usize,
    pub reversed: Vec<bool>,
}

/// Index of the directed edge of `tet` from corner `a` to corner `b`.
#[inline]
pub fn directed_edge_index(tet: usize, a: u8, b: u8) -> usize {
    debug_assert!(a != b && a < 4 && b < 4);
    16 * tet + 4 * a as usize + b as usize
}

/// Face identification classes; faces are indexed `4*tet + face`.
#[derive(Clone, Debug)]
pub struct FaceClasses {
    pub class_of: Vec<u32>,
    pub count: usize,
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra as usize] = rb;
        }
    }

    /// Renumbers roots to `0..count` and returns (class id per element, count).
    fn classes(mut self) -> (Vec<u32>, usize) {
        let n = self.parent.len();
        let mut id = vec![u32::MAX; n];
        let mut next = 0u32;
        let mut out = vec![0u32; n];
        for x in 0..n as u32 {
            let r = self.find(x);
            if id[r as usize] == u32::MAX {
                id[r as usize] = next;
                next += 1;
            }
            out[x as usize] = id[r as usize];
        }
        (out, next as usize)
    }
}

impl Triangulation {
    /// An unglued collection of `n` tetrahedra.
    pub fn new(n: usize) -> Triangulation {
        assert!(n > 0, "a triangulation needs at least one tetrahedron");
        Triangulation { n, gluings: vec![None; 4 * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn gluing(&self, tet: usize, face: u8) -> Option<Gluing> {
        self.gluings[4 * tet + face as usize]
    }

    /// Glues face `f1` of `t1` to face `f2` of `t2` via `perm` (which must
    /// send `f1` to `f2`), setting both sides. Panics if either face is
    /// already glued, or on a face glued to itself.
    pub fn glue(&mut self, t1: usize, f1: u8, t2: usize, f2: u8, perm: Perm4) {
        assert_eq!(perm.apply(f1), f2, "gluing map must send the face label across");
        assert!(!(t1 == t2 && f1 == f2), "cannot glue a face to itself");
        let a = 4 * t1 + f1 as usize;
        let b = 4 * t2 + f2 as usize;
        assert!(self.gluings[a].is_none() && self.gluings[b].is_none(), "face already glued");
        self.gluings[a] = Some(Gluing { tet: t2, face: f2, perm });
        self.gluings[b] = Some(Gluing { tet: t1, face: f1, perm: perm.inverse() });
    }

    /// A copy with `extra` additional unglued tetrahedra appended.
    pub fn grown(&self, extra: usize) -> Triangulation {
        let mut out = Triangulation::new(self.n + extra);
        out.gluings[..self.gluings.len()].clone_from_slice(&self.gluings);
        out
    }

    /// Removes the gluing at `(tet, face)` and its partner.
    pub fn unglue(&mut self, tet: usize, face: u8) {
        if let Some(g) = self.gluings[4 * tet + face as usize].take() {
            self.gluings[4 * g.tet + g.face as usize] = None;
        }
    }

    pub fn open_faces(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        (0..self.n).flat_map(move |t| (0..4u8).map(move |f| (t, f))).filter(|&(t, f)| self.gluing(t, f).is_none())
    }

    pub fn is_closed(&self) -> bool {
        self.gluings.iter().all(|g| g.is_some())
    }

    /// Structural consistency: every present gluing is mirrored by its
    /// partner with the inverse map, carries matching face labels, and no
    /// face is glued to itself.
    pub fn check_structure(&self) -> Result<(), Defect> {
        for t in 0..self.n {
            for f in 0..4u8 {
                let Some(g) = self.gluing(t, f) else { continue };
                if g.perm.apply(f) != g.face {
                    return Err(Defect::BadFaceLabel { tet: t, face: f });
                }
                if g.tet == t && g.face == f {
                    return Err(Defect::SelfGluedFace { tet: t, face: f });
                }
                let back = self.gluing(g.tet, g.face);
                if back != Some(Gluing { tet: t, face: f, perm: g.perm.inverse() }) {
                    return Err(Defect::BrokenInvolution { tet: t, face: f });
                }
            }
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for f in 0..4u8 {
                if let Some(g) = self.gluing(t, f) {
                    if !seen[g.tet] {
                        seen[g.tet] = true;
                        stack.push(g.tet);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Corner identification classes. Unglued faces identify nothing.
    pub fn vertex_classes(&self) -> VertexClasses {
        let mut uf = UnionFind::new(4 * self.n);
        for t in 0..self.n {
            for f in 0..4u8 {
                let Some(g) = self.gluing(t, f) else { continue };
                for i in 0..4u8 {
                    if i != f {
                        uf.union((4 * t + i as usize) as u32, (4 * g.tet + g.perm.apply(i) as usize) as u32);
                    }
                }
            }
        }
        let (class_of, count) = uf.classes();
        VertexClasses { class_of, count }
    }

    /// Directed and undirected edge identification classes.
    pub fn edge_classes(&self) -> EdgeClasses {
        let slots = 16 * self.n;
        let mut directed = UnionFind::new(slots);
        let mut undirected = UnionFind::new(slots);
        for t in 0..self.n {
            for a in 0..4u8 {
                for b in 0..4u8 {
                    if a != b {
                        let i = directed_edge_index(t, a, b) as u32;
                        let j = directed_edge_index(t, b, a) as u32;
                        undirected.union(i, j);
                    }
                }
            }
        }
        for t in 0..self.n {
            for f in 0..4u8 {
                let Some(g) = self.gluing(t, f) else { continue };
                for a in 0..4u8 {
                    for b in 0..4u8 {
                        if a == b || a == f || b == f {
                            continue;
                        }
                        let from = directed_edge_index(t, a, b) as u32;
                        let to = directed_edge_index(g.tet, g.perm.apply(a), g.perm.apply(b)) as u32;
                        directed.union(from, to);
                        undirected.union(from, to);
                    }
                }
            }
        }
        let (directed_raw, _) = directed.classes();
        let (undirected_raw, _) = undirected.classes();

        // the raw numberings include the unused diagonal slots; renumber over
        // real directed edges only
        let mut dir_map = vec![u32::MAX; slots];
        let mut und_map = vec![u32::MAX; slots];
        let mut directed_of = vec![u32::MAX; slots];
        let mut class_of = vec![u32::MAX; slots];
        let mut dir_next = 0u32;
        let mut und_next = 0u32;
        for t in 0..self.n {
            for a in 0..4u8 {
                for b in 0..4u8 {
                    if a == b {
                        continue;
                    }
                    let s = directed_edge_index(t, a, b);
                    let dr = directed_raw[s] as usize;
                    if dir_map[dr] == u32::MAX {
                        dir_map[dr] = dir_next;
                        dir_next += 1;
                    }
                    directed_of[s] = dir_map[dr];
                    let ur = undirected_raw[s] as usize;
                    if und_map[ur] == u32::MAX {
                        und_map[ur] = und_next;
                        und_next += 1;
                    }
                    class_of[s] = und_map[ur];
                }
            }
        }

        let mut reversed = vec![false; und_next as usize];
        for t in 0..self.n {
            for a in 0..4u8 {
                for b in (a + 1)..4 {
                    let i = directed_edge_index(t, a, b);
                    let j = directed_edge_index(t, b, a);
                    if directed_of[i] == directed_of[j] {
                        reversed[class_of[i] as usize] = true;
                    }
                }
            }
        }

        EdgeClasses {
            directed_of,
            directed_count: dir_next as usize,
            class_of,
            count: und_next as usize,
            reversed,
        }
    }

    /// Face identification classes; an unglued face is its own class.
    pub fn face_classes(&self) -> FaceClasses {
        let mut uf = UnionFind::new(4 * self.n);
        for t in 0..self.n {
            for f in 0..4u8 {
                if let Some(g) = self.gluing(t, f) {
                    uf.union((4 * t + f as usize) as u32, (4 * g.tet + g.face as usize) as u32);
                }
            }
        }
        let (class_of, count) = uf.classes();
        FaceClasses { class_of, count }
    }

    /// Euler characteristic of each vertex link, indexed by vertex class.
    ///
    /// The link of a class with `c` corners is a closed surface built from
    /// `c` triangles, `3c/2` arcs, and one vertex per directed edge class
    /// based at the corner class, so its Euler characteristic is
    /// `ends - c/2`. Only meaningful for closed triangulations.
    pub fn vertex_link_eulers(&self) -> Vec<i64> {
        let vc = self.vertex_classes();
        let ec = self.edge_classes();
        let mut corners = vec![0i64; vc.count];
        for t in 0..self.n {
            for i in 0..4u8 {
                corners[vc.class_of[4 * t + i as usize] as usize] += 1;
            }
        }
        // one link vertex per directed edge class, sitting at the source corner
        let mut ends = vec![0i64; vc.count];
        let mut seen = vec![false; ec.directed_count];
        for t in 0..self.n {
            for a in 0..4u8 {
                for b in 0..4u8 {
                    if a == b {
                        continue;
                    }
                    let d = ec.directed_of[directed_edge_index(t, a, b)] as usize;
                    if !seen[d] {
                        seen[d] = true;
                        ends[vc.class_of[4 * t + a as usize] as usize] += 1;
                    }
                }
            }
        }
        (0..vc.count).map(|v| ends[v] - corners[v] / 2).collect()
    }

    /// Full check that this is a one-piece closed 3-manifold triangulation.
    pub fn validate(&self) -> Result<(), Defect> {
        self.check_structure()?;
        for t in 0..self.n {
            for f in 0..4u8 {
                if self.gluing(t, f).is_none() {
                    return Err(Defect::OpenFace { tet: t, face: f });
                }
            }
        }
        if !self.is_connected() {
            return Err(Defect::Disconnected);
        }
        let ec = self.edge_classes();
        for t in 0..self.n {
            for a in 0..4u8 {
                for b in (a + 1)..4 {
                    if ec.reversed[ec.class_of[directed_edge_index(t, a, b)] as usize] {
                        return Err(Defect::ReversedEdge { tet: t, ends: (a, b) });
                    }
                }
            }
        }
        for (class, &chi) in self.vertex_link_eulers().iter().enumerate() {
            if chi != 2 {
                return Err(Defect::BadVertexLink { class, euler: chi });
            }
        }
        Ok(())
    }

    /// Tetrahedron orientations `+1/-1` making every gluing coherent, or
    /// `None` when the triangulation is non-orientable. A gluing is coherent
    /// when `s(t') = -sign(perm) * s(t)`. Requires a connected complex.
    pub fn orientation(&self) -> Option<Vec<i8>> {
        let mut s = vec![0i8; self.n];
        s[0] = 1;
        let mut stack = vec![0usize];
        while let Some(t) = stack.pop() {
            for f in 0..4u8 {
                let Some(g) = self.gluing(t, f) else { continue };
                let want = -g.perm.sign() * s[t];
                if s[g.tet] == 0 {
                    s[g.tet] = want;
                    stack.push(g.tet);
                } else if s[g.tet] != want {
                    return None;
                }
            }
        }
        Some(s)
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation().is_some()
    }

    /// The orientation double cover.
    ///
    /// Sheets are `0` and `1`; tetrahedron `t` on sheet `s` is tetrahedron
    /// `t + s * size()` of the cover. Crossing a gluing with an odd map stays
    /// on the sheet, an even map switches sheets. For orientable input this
    /// is two disjoint copies.
    pub fn double_cover(&self) -> Triangulation {
        let n = self.n;
        let mut cover = Triangulation::new(2 * n);
        for t in 0..n {
            for f in 0..4u8 {
                let Some(g) = self.gluing(t, f) else { continue };
                for sheet in 0..2usize {
                    let target_sheet = if g.perm.sign() == 1 { 1 - sheet } else { sheet };
                    let a = 4 * (t + sheet * n) + f as usize;
                    let b = Gluing { tet: g.tet + target_sheet * n, face: g.face, perm: g.perm };
                    cover.gluings[a] = Some(b);
                }
            }
        }
        debug_assert!(cover.check_structure().is_ok());
        cover
    }

    /// The boundary surface: open faces glued along the arcs where they meet
    /// through the interior.
    pub fn boundary(&self) -> Boundary {
        let faces: Vec<(usize, u8)> = self.open_faces().collect();
        let index_of = |t: usize, f: u8| faces.iter().position(|&x| x == (t, f)).unwrap();

        // pair up the boundary edge slots; slot = (open face, edge of it)
        // identified by walking around the edge through interior gluings
        let mut comp = UnionFind::new(faces.len().max(1));
        // corner classes of the boundary surface: (open face index, corner)
        let mut corners = UnionFind::new(4 * faces.len().max(1));
        // orientation constraints: (from, to, flip sign when transporting)
        let mut constraints: Vec<(usize, usize, bool)> = Vec::new();
        let mut paired = 0usize;

        for (fi, &(t, f)) in faces.iter().enumerate() {
            let verts: Vec<u8> = (0..4u8).filter(|&x| x != f).collect();
            for (a, b) in [(verts[0], verts[1]), (verts[1], verts[2]), (verts[0], verts[2])] {
                let (t2, f2, p) = self.walk_to_boundary(t, f, a, b);
                let fj = index_of(t2, f2);
                let (pa, pb) = (p.apply(a), p.apply(b));
                // each identification is seen from both sides; keep one
                if (fj, pa.min(pb), pa.max(pb)) < (fi, a, b) {
                    continue;
                }
                paired += 1;
                comp.union(fi as u32, fj as u32);
                corners.union((4 * fi + a as usize) as u32, (4 * fj + pa as usize) as u32);
                corners.union((4 * fi + b as usize) as u32, (4 * fj + pb as usize) as u32);
                // the walk carries a->b to p(a)->p(b); coherent surface
                // orientations induce opposite directions on a shared edge,
                // so transport flips the sign exactly when the walk sends the
                // reference direction forward
                let d1 = ref_direction(f, a, b);
                let d2 = ref_direction(f2, pa, pb);
                let forward = (p.apply(d1.0), p.apply(d1.1)) == d2;
                constraints.push((fi, fj, forward));
            }
        }
        debug_assert_eq!(paired * 2, 3 * faces.len(), "every boundary slot pairs up");

        let (component_of_raw, _) = comp.classes();
        let mut comp_ids: Vec<u32> = Vec::new();
        let mut component_of = vec![0usize; faces.len()];
        for i in 0..faces.len() {
            let raw = component_of_raw[i];
            let id = match comp_ids.iter().position(|&r| r == raw) {
                Some(id) => id,
                None => {
                    comp_ids.push(raw);
                    comp_ids.len() - 1
                }
            };
            component_of[i] = id;
        }
        let components = if faces.is_empty() { 0 } else { comp_ids.len() };

        // euler characteristic per component: corners - edges + triangles,
        // with each face holding 3 slots and each boundary edge 2 slots
        let mut chi = vec![0i64; components];
        let (corner_class, corner_count) = corners.classes();
        let mut corner_comp = vec![usize::MAX; corner_count];
        for fi in 0..faces.len() {
            let (_, f) = faces[fi];
            for v in 0..4u8 {
                if v != f {
                    corner_comp[corner_class[4 * fi + v as usize] as usize] = component_of[fi];
                }
            }
        }
        for c in corner_comp {
            if c != usize::MAX {
                chi[c] += 1;
            }
        }
        for fi in 0..faces.len() {
            chi[component_of[fi]] += 1;
        }
        let mut face_count = vec![0i64; components];
        for fi in 0..faces.len() {
            face_count[component_of[fi]] += 1;
        }
        for c in 0..components {
            chi[c] -= 3 * face_count[c] / 2;
        }

        // orientability: propagate triangle signs along the constraints
        let mut orientable = vec![true; components];
        let mut sign = vec![0i8; faces.len()];
        for start in 0..faces.len() {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut stack = vec![start];
            while let Some(fi) = stack.pop() {
                for &(x, y, flip) in &constraints {
                    let to = if x == fi {
                        y
                    } else if y == fi {
                        x
                    } else {
                        continue;
                    };
                    let want = if flip { -sign[fi] } else { sign[fi] };
                    if sign[to] == 0 {
                        sign[to] = want;
                        stack.push(to);
                    } else if sign[to] != want {
                        orientable[component_of[to]] = false;
                    }
                }
            }
        }

        Boundary { faces, component_of, components, chi, orientable }
    }

    /// From the edge `{a, b}` of the open face `(t, f)`, walks around the
    /// edge through interior gluings to the open face on the other side.
    /// Returns that face and the corner map accumulated along the way.
    fn walk_to_boundary(&self, t: usize, f: u8, a: u8, b: u8) -> (usize, u8, Perm4) {
        let (mut t, mut f, mut a, mut b) = (t, f, a, b);
        let mut acc = Perm4::IDENTITY;
        for _ in 0..12 * self.n + 1 {
            // the other face of t containing {a, b}
            let c = (0..4u8).find(|&x| x != a && x != b && x != f).unwrap();
            match self.gluing(t, c) {
                None => return (t, c, acc),
                Some(g) => {
                    acc = acc.then(g.perm);
                    let (na, nb) = (g.perm.apply(a), g.perm.apply(b));
                    t = g.tet;
                    f = g.face;
                    a = na;
                    b = nb;
                }
            }
        }
        panic!("edge walk failed to terminate; broken gluing structure");
    }

    /// Marks each undirected edge class that forms an orientation-reversing
    /// loop: both endpoints at one vertex, and the lift to the orientation
    /// double cover joining the two vertex classes over it. Edges joining
    /// distinct vertices are never flagged.
    ///
    /// In a one-vertex triangulation every edge is a loop, and loops through
    /// the vertex generate the fundamental group, so the triangulation is
    /// orientable exactly when no edge is flagged.
    pub fn orientation_reversing_edges(&self) -> Vec<bool> {
        let vc = self.vertex_classes();
        let ec = self.edge_classes();
        let cover = self.double_cover();
        let cvc = cover.vertex_classes();
        let mut out = vec![false; ec.count];
        let mut seen = vec![false; ec.count];
        for t in 0..self.n {
            for a in 0..4u8 {
                for b in (a + 1)..4 {
                    let e = ec.class_of[directed_edge_index(t, a, b)] as usize;
                    if seen[e] {
                        continue;
                    }
                    seen[e] = true;
                    if vc.class_of[4 * t + a as usize] != vc.class_of[4 * t + b as usize] {
                        continue;
                    }
                    // lift to sheet 0: endpoints are corners a and b of tet t there
                    let ca = cvc.class_of[4 * t + a as usize];
                    let cb = cvc.class_of[4 * t + b as usize];
                    out[e] = ca != cb;
                }
            }
        }
        out
    }
}

/// The surface formed by the open faces of a triangulation, glued along the
/// arcs where they meet through the interior.
#[derive(Clone, Debug)]
pub struct Boundary {
    /// open faces, as (tet, face)
    pub faces: Vec<(usize, u8)>,
    /// connected component of each open face
    pub component_of: Vec<usize>,
    pub components: usize,
    /// euler characteristic of each component
    pub chi: Vec<i64>,
    /// orientability of each component
    pub orientable: Vec<bool>,
}

/// Reference direction of the edge `{a, b}` inside face `f`: the directed
/// edge as it appears in the ascending cycle u0 -> u1 -> u2 -> u0 of the
/// face's corners.
fn ref_direction(f: u8, a: u8, b: u8) -> (u8, u8) {
    let mut verts = [0u8; 3];
    let mut k = 0;
    for v in 0..4u8 {
        if v != f {
            verts[k] = v;
            k += 1;
        }
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if (lo, hi) == (verts[0], verts[2]) {
        (hi, lo)
    } else {
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two tetrahedra glued along all four faces by the identity: the double
    /// of a 3-simplex, a 2-tetrahedron 3-sphere.
    fn doubled_simplex() -> Triangulation {
        let mut t = Triangulation::new(2);
        for f in 0..4u8 {
            t.glue(0, f, 1, f, Perm4::IDENTITY);
        }
        t
    }

    #[test]
    fn doubled_simplex_is_a_sphere_triangulation() {
        let t = doubled_simplex();
        assert!(t.validate().is_ok());
        assert_eq!(t.vertex_classes().count, 4);
        assert_eq!(t.edge_classes().count, 6);
        assert_eq!(t.face_classes().count, 4);
        assert!(t.is_orientable());
        assert_eq!(t.vertex_link_eulers(), alloc::vec![2, 2, 2, 2]);
    }

    #[test]
    fn doubled_simplex_cover_is_two_copies() {
        let t = doubled_simplex();
        let c = t.double_cover();
        assert!(c.check_structure().is_ok());
        assert!(!c.is_connected());
        assert_eq!(c.vertex_classes().count, 8);
        assert!(t.orientation_reversing_edges().iter().all(|&b| !b));
    }

    #[test]
    fn euler_characteristic_vanishes_on_closed_complexes() {
        let t = doubled_simplex();
        let v = t.vertex_classes().count as i64;
        let e = t.edge_classes().count as i64;
        let f = t.face_classes().count as i64;
        assert_eq!(v - e + f - t.size() as i64, 0);
    }

    #[test]
    fn unglue_restores_open_faces() {
        let mut t = doubled_simplex();
        t.unglue(0, 2);
        assert!(!t.is_closed());
        assert_eq!(t.open_faces().count(), 2);
        assert!(matches!(t.validate(), Err(Defect::OpenFace { .. })));
    }

    #[test]
    fn broken_involution_is_reported() {
        let mut t = Triangulation::new(2);
        t.gluings[0] = Some(Gluing { tet: 1, face: 0, perm: Perm4::IDENTITY });
        assert!(matches!(t.check_structure(), Err(Defect::BrokenInvolution { .. })));
    }

    #[test]
    fn closed_complex_has_empty_boundary() {
        let b = doubled_simplex().boundary();
        assert_eq!(b.components, 0);
        assert!(b.faces.is_empty());
    }

    #[test]
    fn lone_tetrahedron_bounds_a_sphere() {
        let b = Triangulation::new(1).boundary();
        assert_eq!(b.components, 1);
        assert_eq!(b.chi, alloc::vec![2]);
        assert_eq!(b.orientable, alloc::vec![true]);
    }

    #[test]
    fn unglued_face_pair_bounds_a_sphere() {
        let mut t = doubled_simplex();
        t.unglue(0, 2);
        let b = t.boundary();
        assert_eq!(b.faces.len(), 2);
        assert_eq!(b.components, 1);
        assert_eq!(b.chi, alloc::vec![2]);
        assert_eq!(b.orientable, alloc::vec![true]);

        // removing a second pair still bounds one sphere: the two glued
        // faces share an edge, so the complex is a folded pair of simplexes
        t.unglue(0, 3);
        let b = t.boundary();
        assert_eq!(b.faces.len(), 4);
        assert_eq!(b.components, 1);
        assert_eq!(b.chi, alloc::vec![2]);
        assert_eq!(b.orientable, alloc::vec![true]);
    }

    #[test]
    fn folded_tetrahedron_bounds_a_projective_plane() {
        // face 0 onto face 1 by the cycle 0 -> 1 -> 2 -> 0: the two open
        // faces close up into a surface with 2 vertices, 3 edges, 2 faces
        let mut t = Triangulation::new(1);
        t.glue(0, 0, 0, 1, Perm4::from_images([1, 2, 0, 3]));
        assert!(t.check_structure().is_ok());
        let b = t.boundary();
        assert_eq!(b.faces.len(), 2);
        assert_eq!(b.components, 1);
        assert_eq!(b.chi, alloc::vec![1]);
        assert_eq!(b.orientable, alloc::vec![false]);
    }
}
