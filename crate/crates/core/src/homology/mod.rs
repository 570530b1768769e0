//! Simplicial homology of triangulations and the invariant fingerprint.
//!
//! The cell structure is the quotient complex: vertex classes, edge classes,
//! face classes, tetrahedra. First homology is read off the Smith normal
//! forms of the two boundary maps, and the fingerprint packages orientability
//! with the first homology of the manifold and of its orientation double
//! cover. The fingerprint is the working notion of "same manifold" for the
//! census: cheap, exact, and sharp enough to separate everything this crate
//! enumerates.

pub mod coords;
pub mod snf;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::trig::{directed_edge_index, EdgeClasses, Triangulation};
use snf::{rank_z2, snf, IMat};

/// A finitely generated abelian group: free rank and invariant factors in
/// dividing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbGroup {
    pub fn free(rank: usize) -> AbGroup {
        AbGroup { rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> u64 {
        self.torsion.iter().product()
    }

    /// Human form such as `Z^2 + Z/2`; `0` for the trivial group.
    pub fn pretty(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        for &t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl core::fmt::Display for AbGroup {
    /// Compact form: rank, then torsion factors, comma separated.
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.rank)?;
        for &t in &self.torsion {
            write!(f, ",{t}")?;
        }
        Ok(())
    }
}

impl core::str::FromStr for AbGroup {
    type Err = String;

    fn from_str(s: &str) -> Result<AbGroup, String> {
        let mut it = s.split(',').map(str::trim);
        let rank: usize = it
            .next()
            .and_then(|r| r.parse().ok())
            .ok_or_else(|| format!("bad rank in `{s}`"))?;
        let mut torsion = Vec::new();
        for part in it {
            let t: u64 = part.parse().map_err(|_| format!("bad torsion factor `{part}`"))?;
            if t < 2 {
                return Err(format!("torsion factor {t} out of range"));
            }
            if let Some(&prev) = torsion.last() {
                if t % prev != 0 {
                    return Err(format!("torsion factors must divide in turn in `{s}`"));
                }
            }
            torsion.push(t);
        }
        Ok(AbGroup { rank, torsion })
    }
}

/// Orients each edge class by its first directed representative in scan
/// order; every consumer of cycle coordinates must agree on this choice.
/// Returns the directed class and the ends of the representative.
pub fn edge_orientations(t: &Triangulation, ec: &EdgeClasses) -> (Vec<u32>, Vec<(usize, u8, u8)>) {
    let mut rep_dir = vec![u32::MAX; ec.count];
    let mut rep_ends = vec![(0usize, 0u8, 0u8); ec.count];
    for tet in 0..t.size() {
        for a in 0..4u8 {
            for b in 0..4u8 {
                if a == b {
                    continue;
                }
                let idx = directed_edge_index(tet, a, b);
                let e = ec.class_of[idx] as usize;
                if rep_dir[e] == u32::MAX {
                    rep_dir[e] = ec.directed_of[idx];
                    rep_ends[e] = (tet, a, b);
                }
            }
        }
    }
    (rep_dir, rep_ends)
}

/// Boundary maps of the quotient cell structure: `d1` from edges to
/// vertices and `d2` from faces to edges. Requires a triangulation with no
/// edge identified with itself in reverse.
pub fn boundary_maps(t: &Triangulation) -> (IMat, IMat) {
    let vc = t.vertex_classes();
    let ec = t.edge_classes();
    let fc = t.face_classes();
    debug_assert!(ec.reversed.iter().all(|&r| !r), "reversed edge has no cell orientation");

    let (rep_dir, rep_ends) = edge_orientations(t, &ec);

    let mut d1 = IMat::zero(vc.count, ec.count);
    for e in 0..ec.count {
        let (tet, a, b) = rep_ends[e];
        let tail = vc.class_of[4 * tet + a as usize] as usize;
        let head = vc.class_of[4 * tet + b as usize] as usize;
        *d1.at_mut(head, e) += 1;
        *d1.at_mut(tail, e) -= 1;
    }

    let mut frep = vec![usize::MAX; fc.count];
    for i in 0..4 * t.size() {
        let c = fc.class_of[i] as usize;
        if frep[c] == usize::MAX {
            frep[c] = i;
        }
    }
    let mut d2 = IMat::zero(ec.count, fc.count);
    for c in 0..fc.count {
        let (tet, f) = (frep[c] / 4, (frep[c] % 4) as u8);
        let v: Vec<u8> = (0..4u8).filter(|&x| x != f).collect();
        // boundary of the triangle (v0, v1, v2): +[v0 v1] +[v1 v2] -[v0 v2]
        for &(a, b, s) in &[(v[0], v[1], 1i128), (v[1], v[2], 1), (v[0], v[2], -1)] {
            let idx = directed_edge_index(tet, a, b);
            let e = ec.class_of[idx] as usize;
            let sign = if ec.directed_of[idx] == rep_dir[e] { s } else { -s };
            *d2.at_mut(e, c) += sign;
        }
    }

    debug_assert_eq!(d1.mul(&d2), IMat::zero(vc.count, fc.count), "d1 * d2 must vanish");
    (d1, d2)
}

/// First integral homology.
pub fn h1(t: &Triangulation) -> AbGroup {
    let (d1, d2) = boundary_maps(t);
    let s1 = snf(&d1);
    let s2 = snf(&d2);
    let rank = d1.cols - s1.rank() - s2.rank();
    AbGroup { rank, torsion: s2.torsion().iter().map(|&x| x as u64).collect() }
}

/// Dimension of first homology with coefficients in the two element field.
pub fn h1_z2_rank(t: &Triangulation) -> usize {
    let (d1, d2) = boundary_maps(t);
    let bit_rows = |m: &IMat| -> Vec<u64> {
        assert!(m.cols <= 64);
        (0..m.rows)
            .map(|i| (0..m.cols).fold(0u64, |acc, j| acc | ((m.at(i, j).rem_euclid(2) as u64) << j)))
            .collect()
    };
    let edges = d2.rows;
    let r1 = rank_z2(&bit_rows(&d1));
    // rank over rows of the transpose; row and column rank agree
    let mut cols_of_d2 = vec![0u64; d2.cols];
    assert!(d2.rows <= 64);
    for i in 0..d2.rows {
        for j in 0..d2.cols {
            cols_of_d2[j] |= (d2.at(i, j).rem_euclid(2) as u64) << i;
        }
    }
    let r2 = rank_z2(&cols_of_d2);
    edges - r1 - r2
}

/// Orientability and the first homology of the manifold and of its
/// orientation double cover. For an orientable manifold the cover entry
/// repeats the manifold's own homology.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub orientable: bool,
    pub h1: AbGroup,
    pub cover_h1: AbGroup,
}

impl Fingerprint {
    pub fn of(t: &Triangulation) -> Fingerprint {
        let orientable = t.is_orientable();
        let h = h1(t);
        let cover_h1 = if orientable { h.clone() } else { h1(&t.double_cover()) };
        Fingerprint { orientable, h1: h, cover_h1 }
    }

    pub fn pretty(&self) -> String {
        format!(
            "{}, H1 = {}, cover H1 = {}",
            if self.orientable { "orientable" } else { "non-orientable" },
            self.h1.pretty(),
            self.cover_h1.pretty()
        )
    }
}

impl core::fmt::Display for Fingerprint {
    /// Compact form `o;rank,t..;rank,t..` with `o` or `n` for orientability.
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{};{};{}", if self.orientable { 'o' } else { 'n' }, self.h1, self.cover_h1)
    }
}

impl core::str::FromStr for Fingerprint {
    type Err = String;

    fn from_str(s: &str) -> Result<Fingerprint, String> {
        let parts: Vec<&str> = s.split(';').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("fingerprint `{s}` must have three `;` fields"));
        }
        let orientable = match parts[0] {
            "o" => true,
            "n" => false,
            other => return Err(format!("bad orientability flag `{other}`")),
        };
        Ok(Fingerprint { orientable, h1: parts[1].parse()?, cover_h1: parts[2].parse()? })
    }
}
