//! Dual spines of one-vertex triangulations and their Stiefel-Whitney
//! surfaces.
//!
//! A closed triangulation with a single vertex is dual to a special spine:
//! spine vertices are the tetrahedra, spine edges are the triangle classes,
//! spine faces are the edge classes, and the complement of the spine is an
//! open ball around the vertex. The boundary of a spine face walks once
//! around the link of its dual edge, alternating corners at spine vertices
//! with sides along spine edges; [`SpineView`] stores that walk as the
//! boundary word of the face.
//!
//! A subset of spine faces meeting every spine edge zero or two times is a
//! closed surface inside the spine, and distinct subsets are never homologous
//! because the spine has no 3-cells. For a non-orientable manifold exactly
//! one such subset is dual to the first Stiefel-Whitney class;
//! [`sw_surface`] extracts it by solving the incidence system over Z/2 and
//! certifying that the solution is unique. [`cover_spine`] and
//! [`lift_surface`] carry the surface into the orientation double cover,
//! where face lengths, vertex valences and a punch-and-collapse pass bound
//! the complexity of the cover from above.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use num_rational::Ratio;

use crate::trig::{directed_edge_index, Defect, Triangulation};

/// Edge slots of a tetrahedron in scan order.
const EDGE_SLOTS: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// One step of a face boundary word: a corner at a spine vertex followed by
/// a side running along a spine edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WordStep {
    /// Tetrahedron passed at the corner before this side.
    pub vertex: usize,
    /// Triangle class carrying the side.
    pub edge: usize,
    /// The side runs from the representative end of the spine edge to the
    /// other end.
    pub forward: bool,
    /// Side slot `3 * edge + k` where `k` numbers the edges of the
    /// representative triangle; each slot is traversed by exactly one face.
    pub germ: u32,
}

/// The spine dual to a closed triangulation.
///
/// Everything later in this module works from the boundary words alone, so
/// the view owns plain combinatorics and keeps no reference to the
/// triangulation it came from.
#[derive(Clone, Debug)]
pub struct SpineView {
    /// Spine vertices: one per tetrahedron.
    pub tets: usize,
    /// Spine faces: one per edge class of the triangulation.
    pub spine_faces: usize,
    /// Spine edges: one per triangle class of the triangulation.
    pub spine_edges: usize,
    /// Boundary word of each spine face; the length of the word is the
    /// length of the face and the degree of its dual edge.
    pub words: Vec<Vec<WordStep>>,
    /// The two triangle instances of each triangle class, representative
    /// first; the ends of the dual spine edge.
    pub tri_inst: Vec<[(usize, u8); 2]>,
    /// Edge class of each edge slot of each tetrahedron.
    pub tet_edges: Vec<[usize; 6]>,
    /// Triangle class of each face of each tetrahedron.
    pub tet_tris: Vec<[usize; 4]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpineError {
    /// The triangulation is not a closed connected manifold.
    Invalid(Defect),
    /// The triangulation has more than one vertex.
    MultiVertex { vertices: usize },
    /// A face subset does not meet every spine edge an even number of times.
    NotACycle { triangle: usize },
    /// The incidence system has no solution for the requested class.
    NoSurface,
    /// The incidence system does not pin the surface down; the solution
    /// space has this dimension.
    SurfaceNotUnique { extra_dim: usize },
    /// The lifted surface disagrees with the faces joining the two
    /// complement balls of the cover.
    CoverMismatch,
    /// An operation that needs a nonempty surface got an empty one.
    EmptySurface,
    /// No face of the lifted surface touches five distinct vertices.
    NoSpreadFace,
    /// The face is not part of the surface.
    FaceNotInSurface { face: usize },
    /// Three-valent vertices of a cover surface must come in sheet pairs.
    UnpairedThreeValent { count: usize },
}

impl core::fmt::Display for SpineError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SpineError::Invalid(d) => write!(f, "not a closed manifold triangulation: {d}"),
            SpineError::MultiVertex { vertices } => {
                write!(f, "spine duality needs one vertex, found {vertices}")
            }
            SpineError::NotACycle { triangle } => {
                write!(f, "face subset meets spine edge {triangle} an odd number of times")
            }
            SpineError::NoSurface => write!(f, "no face subset is dual to the requested class"),
            SpineError::SurfaceNotUnique { extra_dim } => {
                write!(f, "surface not unique: solution space has dimension {extra_dim}")
            }
            SpineError::CoverMismatch => {
                write!(f, "lifted surface differs from the faces joining the two cover balls")
            }
            SpineError::EmptySurface => write!(f, "the surface is empty"),
            SpineError::NoSpreadFace => {
                write!(f, "no surface face touches five distinct vertices")
            }
            SpineError::FaceNotInSurface { face } => {
                write!(f, "face {face} does not lie in the surface")
            }
            SpineError::UnpairedThreeValent { count } => {
                write!(f, "cover surface has {count} three-valent vertices, expected an even count")
            }
        }
    }
}

impl core::error::Error for SpineError {}

/// Dual spine of a closed one-vertex triangulation.
pub fn dual_spine(t: &Triangulation) -> Result<SpineView, SpineError> {
    t.validate().map_err(SpineError::Invalid)?;
    let vertices = t.vertex_classes().count;
    if vertices != 1 {
        return Err(SpineError::MultiVertex { vertices });
    }
    Ok(build_view(t))
}

/// Spine view of any closed complex; used for the double cover, which has
/// two vertices and may be disconnected when the base is orientable.
fn build_view(t: &Triangulation) -> SpineView {
    let n = t.size();
    let ec = t.edge_classes();
    let fc = t.face_classes();

    // renumber triangle classes densely and pick scan-order representatives
    let mut tri_id = vec![usize::MAX; fc.count];
    let mut tri_inst: Vec<[(usize, u8); 2]> = Vec::new();
    for tet in 0..n {
        for f in 0..4u8 {
            let raw = fc.class_of[4 * tet + f as usize] as usize;
            if tri_id[raw] == usize::MAX {
                tri_id[raw] = tri_inst.len();
                let g = t.gluing(tet, f).expect("closed");
                tri_inst.push([(tet, f), (g.tet, g.face)]);
            }
        }
    }
    let spine_edges = tri_inst.len();

    let mut tet_edges = vec![[0usize; 6]; n];
    let mut tet_tris = vec![[0usize; 4]; n];
    for tet in 0..n {
        for (s, &(a, b)) in EDGE_SLOTS.iter().enumerate() {
            tet_edges[tet][s] = ec.class_of[directed_edge_index(tet, a, b)] as usize;
        }
        for f in 0..4u8 {
            tet_tris[tet][f as usize] = tri_id[fc.class_of[4 * tet + f as usize] as usize];
        }
    }

    // boundary word of each spine face: walk the link of its dual edge
    let mut words: Vec<Vec<WordStep>> = vec![Vec::new(); ec.count];
    let mut started = vec![false; ec.count];
    for tet in 0..n {
        for a in 0..4u8 {
            for b in (a + 1)..4 {
                let e = ec.class_of[directed_edge_index(tet, a, b)] as usize;
                if started[e] {
                    continue;
                }
                started[e] = true;
                let z = (0..4u8).find(|&x| x != a && x != b).unwrap();
                words[e] = walk_edge_link(t, &tri_inst, &tet_tris, tet, a, b, z);
            }
        }
    }

    // every slot of every spine edge is used by exactly one side
    let mut germ_seen = vec![0u8; 3 * spine_edges];
    for w in &words {
        for st in w {
            germ_seen[st.germ as usize] += 1;
        }
    }
    debug_assert!(germ_seen.iter().all(|&c| c == 1));

    SpineView { tets: n, spine_faces: ec.count, spine_edges, words, tri_inst, tet_edges, tet_tris }
}

/// Cyclic boundary word of the face dual to the edge `(a, b)` of `tet`,
/// starting at that corner and crossing the triangle containing `z` first.
fn walk_edge_link(
    t: &Triangulation,
    tri_inst: &[[(usize, u8); 2]],
    tet_tris: &[[usize; 4]],
    tet: usize,
    a: u8,
    b: u8,
    z: u8,
) -> Vec<WordStep> {
    let start = (tet, a, b, z);
    let mut state = start;
    let mut word = Vec::new();
    loop {
        let (ct, u, v, cz) = state;
        let w = (0..4u8).find(|&x| x != u && x != v && x != cz).unwrap();
        // the crossing face contains u, v, cz, so its label is w
        let g = t.gluing(ct, w).expect("closed");
        let edge = tet_tris[ct][w as usize];
        let forward = tri_inst[edge][0] == (ct, w);
        let (ru, rv) = if forward {
            (u, v)
        } else {
            debug_assert_eq!(tri_inst[edge][1], (ct, w));
            (g.perm.apply(u), g.perm.apply(v))
        };
        // side slot within the representative triangle: its three edges in
        // slot order restricted to the face
        let rep_face = tri_inst[edge][0].1;
        let k = EDGE_SLOTS
            .iter()
            .filter(|&&(x, y)| x != rep_face && y != rep_face)
            .position(|&(x, y)| (x, y) == (ru.min(rv), ru.max(rv)))
            .expect("side edge lies on the representative triangle");
        word.push(WordStep { vertex: ct, edge, forward, germ: (3 * edge + k) as u32 });
        state = (g.tet, g.perm.apply(u), g.perm.apply(v), g.perm.apply(w));
        if state == start {
            break;
        }
        assert!(word.len() <= 16 * t.size(), "edge link walk does not close");
    }
    word
}

/// A closed surface sitting inside a spine as a subset of its faces.
#[derive(Clone, Debug)]
pub struct SwSurface {
    /// Member spine faces, ascending.
    pub faces: Vec<usize>,
    /// Membership flag per spine face.
    pub in_surface: Vec<bool>,
    /// Spine edges crossed by the surface, flag per triangle class.
    pub paired: Vec<bool>,
    /// Valence of each spine vertex in the intersection graph: 0, 3 or 4.
    pub valence: Vec<u8>,
    /// Number of 3-valent vertices of the intersection graph.
    pub n3: usize,
    /// Number of 4-valent vertices.
    pub n4: usize,
    /// Euler characteristic of the surface.
    pub chi: i64,
    /// Whether the surface is orientable, decided by 2-coloring the face
    /// polygons across their shared sides.
    pub orientable: bool,
}

impl SwSurface {
    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
}

/// Builds the closed surface formed by a subset of spine faces, checking the
/// even-incidence condition and measuring the result.
///
/// The link of a spine vertex is the complete graph on the four faces of the
/// dual tetrahedron, with one link edge per edge of it. A face subset with
/// even incidence cuts an even subgraph of each link, and the even subgraphs
/// of that graph are the empty one, four triangles and three squares; no two
/// disjoint cycles fit in it, so the surface passes each vertex in a single
/// disc:
///
/// ```text
///   vertex link          triangle cycle        square cycle
///    a --- b               a --- b               a --- b
///    | \ / |                \    |               |     |
///    |  X  |                 \   |               |     |
///    | / \ |                  \  |               |     |
///    c --- d                   \ d               c --- d
///   (all six)             3-valent vertex      4-valent vertex
/// ```
///
/// A triangle covers three of the four spine edge germs at the vertex, a
/// square covers all four; the count of covered germs is the valence of the
/// vertex in the intersection graph and equals the number of surface corners
/// the tetrahedron carries.
pub fn surface_from_faces(sp: &SpineView, subset: &[bool]) -> Result<SwSurface, SpineError> {
    assert_eq!(subset.len(), sp.spine_faces);

    // germs of each spine edge on the subset, at most three
    let mut germs: Vec<Vec<(usize, bool)>> = vec![Vec::new(); sp.spine_edges];
    let mut corners = vec![0u8; sp.tets];
    for e in 0..sp.spine_faces {
        if !subset[e] {
            continue;
        }
        for st in &sp.words[e] {
            germs[st.edge].push((e, st.forward));
            corners[st.vertex] += 1;
        }
    }
    let mut paired = vec![false; sp.spine_edges];
    for (tc, g) in germs.iter().enumerate() {
        match g.len() {
            0 => {}
            2 => paired[tc] = true,
            _ => return Err(SpineError::NotACycle { triangle: tc }),
        }
    }

    // valences; cross-check the corner count against the link subgraph
    let mut n3 = 0;
    let mut n4 = 0;
    let mut valence = vec![0u8; sp.tets];
    for tet in 0..sp.tets {
        let c = corners[tet];
        assert!(c == 0 || c == 3 || c == 4, "link subgraph is not an even subgraph");
        valence[tet] = c;
        match c {
            3 => n3 += 1,
            4 => n4 += 1,
            _ => {}
        }
        let degree_two_faces = (0..4usize)
            .filter(|&f| {
                let on: u8 = EDGE_SLOTS
                    .iter()
                    .enumerate()
                    .filter(|&(_, &(x, y))| x != f as u8 && y != f as u8)
                    .map(|(s, _)| subset[sp.tet_edges[tet][s]] as u8)
                    .sum();
                assert!(on != 1 && on != 3, "link subgraph is not an even subgraph");
                on == 2
            })
            .count();
        assert_eq!(degree_two_faces, c as usize);
    }

    let faces: Vec<usize> = (0..sp.spine_faces).filter(|&e| subset[e]).collect();
    let vertices = valence.iter().filter(|&&c| c != 0).count() as i64;
    let edges = paired.iter().filter(|&&p| p).count() as i64;
    let chi = vertices - edges + faces.len() as i64;

    // orientability: orient every polygon by its walk direction; a shared
    // side is coherent when the two polygons run it in opposite directions
    let mut color = vec![0i8; sp.spine_faces];
    let mut orientable = true;
    'outer: for &seed in &faces {
        if color[seed] != 0 {
            continue;
        }
        color[seed] = 1;
        let mut stack = vec![seed];
        while let Some(e) = stack.pop() {
            for st in &sp.words[e] {
                let g = &germs[st.edge];
                debug_assert_eq!(g.len(), 2);
                let (other, flip) = if g[0] == (e, st.forward) {
                    (g[1].0, g[1].1 == st.forward)
                } else {
                    (g[0].0, g[0].1 == st.forward)
                };
                let want = if flip { -color[e] } else { color[e] };
                if color[other] == 0 {
                    color[other] = want;
                    stack.push(other);
                } else if color[other] != want {
                    orientable = false;
                    break 'outer;
                }
            }
        }
    }

    Ok(SwSurface { faces, in_surface: subset.to_vec(), paired, valence, n3, n4, chi, orientable })
}

/// Values of the first Stiefel-Whitney class on the edge loops of a
/// one-vertex triangulation, indexed by edge class.
pub type W1Class = Vec<bool>;

/// The unique surface in the spine dual to the class `w`.
///
/// `w` assigns a Z/2 value to each edge loop of the triangulation; for the
/// Stiefel-Whitney surface pass the orientation-reversing edge flags. The
/// incidence system is solved over Z/2 with the pairing pinned on a basis of
/// the loop space, and the solution must be a single point: anything else is
/// reported as an error, never patched over.
pub fn sw_surface(sp: &SpineView, w: &[bool]) -> Result<SwSurface, SpineError> {
    assert_eq!(w.len(), sp.spine_faces);
    let cols = sp.spine_faces;
    assert!(cols < 127, "face count exceeds the solver's bit width");
    let aug = 1u128 << cols;

    // incidence matrix: one row per spine edge, bit e set when face e runs
    // along that edge an odd number of times
    let mut incidence = vec![0u128; sp.spine_edges];
    for e in 0..cols {
        for st in &sp.words[e] {
            incidence[st.edge] ^= 1 << e;
        }
    }

    // a class must vanish on the boundary of every triangle, or no surface
    // can pair with it on all loops at once
    let wbits: u128 = (0..cols).filter(|&e| w[e]).map(|e| 1u128 << e).sum();
    if incidence.iter().any(|&row| (row & wbits).count_ones() % 2 == 1) {
        return Err(SpineError::NoSurface);
    }

    // a basis of the loop space: edge loops whose classes span the quotient
    // by the triangle relations, read off the non-pivot columns
    let mut reduced = incidence.clone();
    let pivots = gf2_reduce(&mut reduced, cols);
    let basis: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();

    // cycle condition plus the pairing on the basis loops
    let mut system = incidence;
    for &e in &basis {
        system.push((1u128 << e) | if w[e] { aug } else { 0 });
    }
    let rank = gf2_reduce(&mut system, cols).len();
    if system.iter().any(|&r| r == aug) {
        return Err(SpineError::NoSurface);
    }
    if rank < cols {
        return Err(SpineError::SurfaceNotUnique { extra_dim: cols - rank });
    }
    let mut x = vec![false; cols];
    for &row in &system {
        if row != 0 {
            let c = row.trailing_zeros() as usize;
            x[c] = row & aug != 0;
        }
    }

    // the solution must agree with the pairing on every loop, not only the
    // basis; for a cycle both sides descend to homology, so this is forced
    assert_eq!(x, w, "solved surface disagrees with the class off the basis");
    surface_from_faces(sp, &x)
}

/// Gauss-Jordan reduction over Z/2 on `cols` low bits; higher bits ride
/// along as augmentation. Returns the pivot columns.
fn gf2_reduce(rows: &mut [u128], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0usize;
    for c in 0..cols {
        let Some(p) = (next..rows.len()).find(|&r| rows[r] & (1 << c) != 0) else { continue };
        rows.swap(next, p);
        for r in 0..rows.len() {
            if r != next && rows[r] & (1 << c) != 0 {
                rows[r] ^= rows[next];
            }
        }
        pivots.push(c);
        next += 1;
    }
    pivots
}

/// The orientation double cover of a one-vertex triangulation, viewed as a
/// spine, with the projection to the base recorded per face.
pub struct CoverSpine {
    pub spine: SpineView,
    /// Base edge class under each cover edge class.
    pub base_class: Vec<usize>,
    /// Cover faces whose dual edge joins the two complement balls.
    pub joins_distinct: Vec<bool>,
}

pub fn cover_spine(t: &Triangulation) -> Result<CoverSpine, SpineError> {
    t.validate().map_err(SpineError::Invalid)?;
    let vertices = t.vertex_classes().count;
    if vertices != 1 {
        return Err(SpineError::MultiVertex { vertices });
    }
    let n = t.size();
    let base_ec = t.edge_classes();
    let cover = t.double_cover();
    let cec = cover.edge_classes();
    let cvc = cover.vertex_classes();
    let spine = build_view(&cover);

    let mut base_class = vec![usize::MAX; cec.count];
    let mut joins_distinct = vec![false; cec.count];
    for ct in 0..cover.size() {
        for a in 0..4u8 {
            for b in (a + 1)..4 {
                let ce = cec.class_of[directed_edge_index(ct, a, b)] as usize;
                if base_class[ce] != usize::MAX {
                    continue;
                }
                base_class[ce] = base_ec.class_of[directed_edge_index(ct % n, a, b)] as usize;
                joins_distinct[ce] =
                    cvc.class_of[4 * ct + a as usize] != cvc.class_of[4 * ct + b as usize];
            }
        }
    }
    Ok(CoverSpine { spine, base_class, joins_distinct })
}

/// Lifts a surface of the base spine to the cover spine.
///
/// The lift is computed two ways: as the preimage of the base faces, and as
/// the set of cover faces whose dual edge joins the two complement balls.
/// The two must agree, the lift must double the Euler characteristic, and it
/// must be orientable.
pub fn lift_surface(cs: &CoverSpine, base: &SwSurface) -> Result<SwSurface, SpineError> {
    let lifted: Vec<bool> =
        (0..cs.spine.spine_faces).map(|ce| base.in_surface[cs.base_class[ce]]).collect();
    if lifted != cs.joins_distinct {
        return Err(SpineError::CoverMismatch);
    }
    let sw = surface_from_faces(&cs.spine, &lifted)?;
    assert_eq!(sw.chi, 2 * base.chi, "lift does not double the Euler characteristic");
    assert!(sw.orientable, "lifted surface is not orientable");
    Ok(sw)
}

/// Face length statistics of a lifted surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LengthStats {
    /// Pairs of 3-valent vertices; the deck transformation matches them up.
    pub n3: i64,
    /// 4-valent vertices.
    pub n4: i64,
    /// Euler characteristic of the lifted surface.
    pub chi: i64,
    /// Number of faces.
    pub faces: i64,
    /// Total length over the faces.
    pub total: i64,
    /// Average face length `total / faces`, exact.
    pub average: Ratio<i64>,
}

/// Exact average face length of a lifted surface in its cover spine.
///
/// The face count equals `chi + n3 + n4` and the total length equals
/// `6 * n3 + 4 * n4`; both identities are recomputed from the words and
/// asserted.
pub fn average_face_length(sp: &SpineView, sw: &SwSurface) -> Result<LengthStats, SpineError> {
    if sw.is_empty() {
        return Err(SpineError::EmptySurface);
    }
    if sw.n3 % 2 != 0 {
        return Err(SpineError::UnpairedThreeValent { count: sw.n3 });
    }
    let n3 = (sw.n3 / 2) as i64;
    let n4 = sw.n4 as i64;
    let faces = sw.faces.len() as i64;
    let total: i64 = sw.faces.iter().map(|&e| sp.words[e].len() as i64).sum();
    assert_eq!(faces, sw.chi + n3 + n4);
    assert_eq!(total, 6 * n3 + 4 * n4);
    Ok(LengthStats { n3, n4, chi: sw.chi, faces, total, average: Ratio::new(total, faces) })
}

/// Number of distinct spine vertices adjacent to a face.
pub fn distinct_vertices(sp: &SpineView, face: usize) -> usize {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for st in &sp.words[face] {
        seen.insert(st.vertex);
    }
    seen.len()
}

/// A surface face adjacent to at least five distinct vertices, lowest id.
///
/// Failure means the spine was not a minimal spine of a closed non-orientable
/// irreducible manifold with no embedded projective planes: for those a
/// qualifying face always exists in the lifted surface.
pub fn find_face_ge5(sp: &SpineView, sw: &SwSurface) -> Result<usize, SpineError> {
    if sw.is_empty() {
        return Err(SpineError::EmptySurface);
    }
    sw.faces.iter().copied().find(|&e| distinct_vertices(sp, e) >= 5).ok_or(SpineError::NoSpreadFace)
}

/// Punches a hole in a surface face of the cover spine, expands it over the
/// whole face, and collapses greedily; returns how many spine vertices keep
/// their full local cone afterwards.
///
/// Removing the face already strips a face germ from every vertex adjacent
/// to it, so the count is at most `sp.tets` minus the number of distinct
/// vertices adjacent to the face; the collapse only lowers it further. The
/// final count depends on the collapse order, the inequality does not.
pub fn punch_and_collapse(sp: &SpineView, sw: &SwSurface, face: usize) -> Result<usize, SpineError> {
    if face >= sp.spine_faces || !sw.in_surface[face] {
        return Err(SpineError::FaceNotInSurface { face });
    }

    let mut face_alive = vec![true; sp.spine_faces];
    let mut edge_alive = vec![true; sp.spine_edges];
    let mut vert_alive = vec![true; sp.tets];
    // germ counts of live cells on the boundaries of higher live cells
    let mut edge_in_faces = vec![0usize; sp.spine_edges];
    let mut vert_in_faces = vec![0usize; sp.tets];
    let mut vert_in_edges = vec![0usize; sp.tets];
    for e in 0..sp.spine_faces {
        for st in &sp.words[e] {
            edge_in_faces[st.edge] += 1;
            vert_in_faces[st.vertex] += 1;
        }
    }
    for tc in 0..sp.spine_edges {
        vert_in_edges[sp.tri_inst[tc][0].0] += 1;
        vert_in_edges[sp.tri_inst[tc][1].0] += 1;
    }

    let kill_face = |e: usize,
                     face_alive: &mut [bool],
                     edge_in_faces: &mut [usize],
                     vert_in_faces: &mut [usize]| {
        face_alive[e] = false;
        for st in &sp.words[e] {
            edge_in_faces[st.edge] -= 1;
            vert_in_faces[st.vertex] -= 1;
        }
    };
    kill_face(face, &mut face_alive, &mut edge_in_faces, &mut vert_in_faces);

    loop {
        let mut progressed = false;
        for tc in 0..sp.spine_edges {
            if !edge_alive[tc] || edge_in_faces[tc] != 1 {
                continue;
            }
            // free edge: exactly one germ on one live face; collapse the pair
            let owner = (0..sp.spine_faces)
                .find(|&e| face_alive[e] && sp.words[e].iter().any(|st| st.edge == tc))
                .expect("germ count says a live owner exists");
            edge_alive[tc] = false;
            vert_in_edges[sp.tri_inst[tc][0].0] -= 1;
            vert_in_edges[sp.tri_inst[tc][1].0] -= 1;
            kill_face(owner, &mut face_alive, &mut edge_in_faces, &mut vert_in_faces);
            progressed = true;
        }
        for v in 0..sp.tets {
            if !vert_alive[v] || vert_in_faces[v] != 0 || vert_in_edges[v] != 1 {
                continue;
            }
            // free vertex: one live edge end, no live face corners
            let owner = (0..sp.spine_edges)
                .find(|&tc| {
                    edge_alive[tc] && (sp.tri_inst[tc][0].0 == v || sp.tri_inst[tc][1].0 == v)
                })
                .expect("germ count says a live owner exists");
            vert_alive[v] = false;
            edge_alive[owner] = false;
            vert_in_edges[sp.tri_inst[owner][0].0] -= 1;
            vert_in_edges[sp.tri_inst[owner][1].0] -= 1;
            // v itself may have been an end of the removed edge twice; the
            // counts for dead vertices are never read again
            progressed = true;
        }
        if !progressed {
            break;
        }
    }

    // a vertex keeps its full local cone when every incident cell survived
    let count = (0..sp.tets)
        .filter(|&v| {
            vert_alive[v]
                && sp.tet_tris[v].iter().all(|&tc| edge_alive[tc])
                && sp.tet_edges[v].iter().all(|&e| face_alive[e])
        })
        .count();
    assert!(count + distinct_vertices(sp, face) <= sp.tets);
    Ok(count)
}

/// Local configurations that certify a spine is not minimal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pruning {
    /// An edge of the intersection graph with equal endpoints, in the base
    /// or in the cover.
    pub loop_edge: bool,
    /// A face of the lifted surface running twice along one spine edge of
    /// the intersection graph.
    pub edge_hit_twice: bool,
    /// An embedded face of length at most 3: in the base outright, or in the
    /// cover with its whole boundary on the lifted surface.
    pub small_embedded_face: bool,
    /// An embedded square of the lifted surface whose corner valences are
    /// 3, 3, 4, 4 in cyclic order.
    pub forbidden_square: bool,
}

fn embedded(sp: &SpineView, face: usize) -> bool {
    let w = &sp.words[face];
    let mut verts = BTreeSet::new();
    let mut edges = BTreeSet::new();
    w.iter().all(|st| verts.insert(st.vertex)) && w.iter().all(|st| edges.insert(st.edge))
}

/// Runs the non-minimality detectors on a one-vertex triangulation.
///
/// Orientable input carries no surface and reports everything false. Any
/// true flag certifies that no minimal spine looks like this one, so the
/// census may discard the triangulation; a surface-vertex-minimal minimal
/// spine of the same manifold never raises a flag.
pub fn pruning_predicates(t: &Triangulation) -> Result<Pruning, SpineError> {
    let sp = dual_spine(t)?;
    if t.is_orientable() {
        return Ok(Pruning::default());
    }
    let w = t.orientation_reversing_edges();
    let sw = sw_surface(&sp, &w)?;
    let cs = cover_spine(t)?;
    let swc = lift_surface(&cs, &sw)?;
    let csp = &cs.spine;

    let has_loop = |spx: &SpineView, swx: &SwSurface| {
        (0..spx.spine_edges)
            .any(|tc| swx.paired[tc] && spx.tri_inst[tc][0].0 == spx.tri_inst[tc][1].0)
    };
    let loop_edge = has_loop(&sp, &sw) || has_loop(csp, &swc);

    let edge_hit_twice = swc.faces.iter().any(|&e| {
        let mut seen = BTreeSet::new();
        csp.words[e].iter().any(|st| !seen.insert(st.edge))
    });

    let small_in_base = sp.tets >= 2
        && (0..sp.spine_faces).any(|e| sp.words[e].len() <= 3 && embedded(&sp, e));
    let small_in_cover = (0..csp.spine_faces).any(|e| {
        csp.words[e].len() <= 3
            && embedded(csp, e)
            && csp.words[e].iter().all(|st| swc.paired[st.edge])
    });
    let small_embedded_face = small_in_base || small_in_cover;

    let forbidden_square = swc.faces.iter().any(|&e| {
        if csp.words[e].len() != 4 || !embedded(csp, e) {
            return false;
        }
        let v: Vec<u8> = csp.words[e].iter().map(|st| swc.valence[st.vertex]).collect();
        (0..4).any(|r| (0..4).map(|i| v[(r + i) % 4]).eq([3, 3, 4, 4]))
    });

    Ok(Pruning { loop_edge, edge_hit_twice, small_embedded_face, forbidden_square })
}

/// Plain-text dump of a spine and optionally a surface in it, for debugging
/// and for the acceptance suite.
pub fn dump(sp: &SpineView, sw: Option<&SwSurface>) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "spine: {} vertices, {} edges, {} faces",
        sp.tets, sp.spine_edges, sp.spine_faces
    );
    for e in 0..sp.spine_faces {
        let mark = match sw {
            Some(s) if s.in_surface[e] => " *",
            _ => "",
        };
        let verts: Vec<String> =
            sp.words[e].iter().map(|st| alloc::format!("{}", st.vertex)).collect();
        let _ = writeln!(
            out,
            "face {e}: length {} through {}{}",
            sp.words[e].len(),
            verts.join(" "),
            mark
        );
    }
    if let Some(s) = sw {
        let _ = writeln!(
            out,
            "surface: {} faces, n3 {}, n4 {}, chi {}, {}",
            s.faces.len(),
            s.n3,
            s.n4,
            s.chi,
            if s.orientable { "orientable" } else { "non-orientable" }
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solbundle::Mat2;
    use crate::trig::bundle::layered_torus_bundle;

    fn three_torus() -> Triangulation {
        layered_torus_bundle(&Mat2::new(1, 0, 0, 1)).unwrap()
    }

    fn kxs1() -> Triangulation {
        layered_torus_bundle(&Mat2::new(1, 0, 0, -1)).unwrap()
    }

    #[test]
    fn words_close_and_cover_the_edge_corner_count() {
        let t = three_torus();
        let sp = dual_spine(&t).unwrap();
        assert_eq!(sp.tets, t.size());
        let total: usize = sp.words.iter().map(|w| w.len()).sum();
        assert_eq!(total, 6 * t.size());
        let ec = t.edge_classes();
        for e in 0..sp.spine_faces {
            let degree = (0..t.size())
                .flat_map(|tet| (0..3u8).flat_map(move |a| ((a + 1)..4).map(move |b| (tet, a, b))))
                .filter(|&(tet, a, b)| ec.class_of[directed_edge_index(tet, a, b)] as usize == e)
                .count();
            assert_eq!(sp.words[e].len(), degree);
        }
    }

    #[test]
    fn zero_class_on_orientable_input_gives_the_empty_surface() {
        let t = three_torus();
        let sp = dual_spine(&t).unwrap();
        let w = vec![false; sp.spine_faces];
        let sw = sw_surface(&sp, &w).unwrap();
        assert!(sw.is_empty());
        assert_eq!(sw.chi, 0);
        assert!(sw.orientable);
        assert_eq!(average_face_length(&sp, &sw), Err(SpineError::EmptySurface));
    }

    // Independent oracle: enumerate every face subset of a small spine and
    // keep those meeting each spine edge 0 or 2 times. The solver must
    // accept exactly these and return each one unchanged, and their number
    // must match the rank of H1 over Z/2.
    #[test]
    fn brute_force_subsets_agree_with_the_solver() {
        let t = three_torus();
        let sp = dual_spine(&t).unwrap();
        assert!(sp.spine_faces <= 12);

        let mut cycles = 0usize;
        for mask in 0..(1u32 << sp.spine_faces) {
            let subset: Vec<bool> = (0..sp.spine_faces).map(|e| mask & (1 << e) != 0).collect();
            let mut counts = vec![0u8; sp.spine_edges];
            for e in 0..sp.spine_faces {
                if subset[e] {
                    for st in &sp.words[e] {
                        counts[st.edge] += 1;
                    }
                }
            }
            let is_cycle = counts.iter().all(|&c| c == 0 || c == 2);
            match sw_surface(&sp, &subset) {
                Ok(sw) => {
                    assert!(is_cycle);
                    assert_eq!(sw.in_surface, subset);
                    cycles += 1;
                }
                Err(SpineError::NoSurface) => assert!(!is_cycle),
                Err(other) => panic!("unexpected error {other:?}"),
            }
        }
        let rank = crate::homology::h1_z2_rank(&t);
        assert_eq!(cycles, 1usize << rank);
    }

    #[test]
    fn reversing_bundle_carries_a_torus_like_surface() {
        let t = kxs1();
        assert!(!t.is_orientable());
        let sp = dual_spine(&t).unwrap();
        let w = t.orientation_reversing_edges();
        assert!(w.iter().any(|&b| b));
        let sw = sw_surface(&sp, &w).unwrap();
        assert!(!sw.is_empty());
        assert!(sw.orientable);
        assert!(sw.chi <= 0);
    }

    #[test]
    fn lift_doubles_the_surface_and_matches_the_ball_computation() {
        for a in [Mat2::new(1, 0, 0, -1), Mat2::new(1, 1, 1, 0), Mat2::new(2, 1, 1, 0)] {
            let t = layered_torus_bundle(&a).unwrap();
            let sp = dual_spine(&t).unwrap();
            let sw = sw_surface(&sp, &t.orientation_reversing_edges()).unwrap();
            let cs = cover_spine(&t).unwrap();
            let swc = lift_surface(&cs, &sw).unwrap();
            assert_eq!(swc.chi, 2 * sw.chi);
            assert!(swc.orientable);
            let stats = average_face_length(&cs.spine, &swc).unwrap();
            assert!(stats.average >= Ratio::new(4, 1), "average {:?}", stats.average);
            assert_eq!(stats.faces, stats.chi + stats.n3 + stats.n4);
            assert_eq!(stats.total, 6 * stats.n3 + 4 * stats.n4);
        }
    }

    #[test]
    fn punch_bound_holds_for_every_surface_face() {
        let t = kxs1();
        let sp = dual_spine(&t).unwrap();
        let sw = sw_surface(&sp, &t.orientation_reversing_edges()).unwrap();
        let cs = cover_spine(&t).unwrap();
        let swc = lift_surface(&cs, &sw).unwrap();
        for &face in &swc.faces {
            let left = punch_and_collapse(&cs.spine, &swc, face).unwrap();
            assert!(left + distinct_vertices(&cs.spine, face) <= cs.spine.tets);
        }
        let outside = (0..cs.spine.spine_faces).find(|&e| !swc.in_surface[e]).unwrap();
        assert_eq!(
            punch_and_collapse(&cs.spine, &swc, outside),
            Err(SpineError::FaceNotInSurface { face: outside })
        );
    }

    #[test]
    fn orientable_input_raises_no_flags() {
        let t = three_torus();
        assert_eq!(pruning_predicates(&t).unwrap(), Pruning::default());
    }

    #[test]
    fn dump_lists_faces_and_surface_counts() {
        let t = kxs1();
        let sp = dual_spine(&t).unwrap();
        let sw = sw_surface(&sp, &t.orientation_reversing_edges()).unwrap();
        let text = dump(&sp, Some(&sw));
        assert!(text.contains("spine:"));
        assert!(text.contains("surface:"));
        assert!(text.contains("face 0:"));
    }
}
