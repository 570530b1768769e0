//! Canonical signatures for connected triangulations.
//!
//! Two triangulations get the same signature exactly when they differ by a
//! relabelling of tetrahedra and corners. The signature is built by running a
//! deterministic traversal from every (tetrahedron, corner labelling) start,
//! encoding the gluings met along the way, and keeping the lexicographically
//! smallest stream; a discovered tetrahedron is always relabelled so that the
//! gluing that found it becomes the identity, which makes the stream depend
//! only on the isomorphism class.
//!
//! The string form is `n:` followed by one token per (tet, face) in traversal
//! order: `~` for an unglued face, otherwise three characters (target tet in
//! base 36, target face digit, gluing map code in base 24).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Perm4, Triangulation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigError {
    pub message: String,
}

impl core::fmt::Display for SigError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "bad signature: {}", self.message)
    }
}

impl core::error::Error for SigError {}

fn err<T>(message: impl Into<String>) -> Result<T, SigError> {
    Err(SigError { message: message.into() })
}

const OPEN: u16 = 0;

fn glued_token(tet: usize, face: u8, perm: Perm4) -> u16 {
    1 + ((tet as u16) * 4 + face as u16) * 24 + perm.code() as u16
}

impl Triangulation {
    /// The canonical signature. Requires a connected complex.
    pub fn iso_sig(&self) -> String {
        assert!(self.is_connected(), "signatures are defined for connected complexes");
        let mut best: Option<Vec<u16>> = None;
        for t0 in 0..self.size() {
            for p0 in Perm4::all() {
                if let Some(tokens) = self.traverse(t0, p0, best.as_deref()) {
                    best = Some(tokens);
                }
            }
        }
        encode(self.size(), &best.expect("at least one start succeeds"))
    }

    /// Token stream for one start, or `None` once it compares greater than
    /// `best`.
    fn traverse(&self, t0: usize, p0: Perm4, best: Option<&[u16]>) -> Option<Vec<u16>> {
        let n = self.size();
        let mut new_of = vec![usize::MAX; n];
        let mut old_of = vec![usize::MAX; n];
        let mut relabel = vec![Perm4::IDENTITY; n];
        new_of[t0] = 0;
        old_of[0] = t0;
        relabel[t0] = p0;
        let mut discovered = 1;
        let mut tokens = Vec::with_capacity(4 * n);
        let mut tied = best.is_some();
        for k in 0..n {
            let t = old_of[k];
            debug_assert!(t != usize::MAX, "traversal requires a connected complex");
            let rt = relabel[t];
            let rt_inv = rt.inverse();
            for f_new in 0..4u8 {
                let f_old = rt_inv.apply(f_new);
                let token = match self.gluing(t, f_old) {
                    None => OPEN,
                    Some(g) => {
                        if new_of[g.tet] == usize::MAX {
                            new_of[g.tet] = discovered;
                            old_of[discovered] = g.tet;
                            // relabel so this gluing reads as the identity
                            relabel[g.tet] = g.perm.inverse().then(rt);
                            discovered += 1;
                        }
                        let p_new = rt_inv.then(g.perm).then(relabel[g.tet]);
                        glued_token(new_of[g.tet], relabel[g.tet].apply(g.face), p_new)
                    }
                };
                if tied {
                    match token.cmp(&best.unwrap()[tokens.len()]) {
                        core::cmp::Ordering::Greater => return None,
                        core::cmp::Ordering::Less => tied = false,
                        core::cmp::Ordering::Equal => {}
                    }
                }
                tokens.push(token);
            }
        }
        if tied {
            // identical to the current best; keeping either is fine
            return None;
        }
        Some(tokens)
    }

    /// Rebuilds a triangulation from a signature string.
    pub fn from_iso_sig(sig: &str) -> Result<Triangulation, SigError> {
        let Some((head, body)) = sig.split_once(':') else {
            return err("missing `:`");
        };
        let n: usize = match head.parse() {
            Ok(n) if n > 0 => n,
            _ => return err("bad size"),
        };
        let tokens = decode_tokens(body, n)?;
        if tokens.len() != 4 * n {
            return err("wrong number of tokens");
        }
        let mut trig = Triangulation::new(n);
        for (i, &token) in tokens.iter().enumerate() {
            let (t, f) = (i / 4, (i % 4) as u8);
            if token == OPEN {
                continue;
            }
            let code = token - 1;
            let perm = Perm4::from_code((code % 24) as u8);
            let face = ((code / 24) % 4) as u8;
            let tet = (code / 96) as usize;
            if perm.apply(f) != face {
                return err("gluing map does not match the face labels");
            }
            if tet == t && face == f {
                return err("face glued to itself");
            }
            match trig.gluing(t, f) {
                Some(existing) => {
                    if existing.tet != tet || existing.face != face || existing.perm != perm {
                        return err("conflicting gluings for one face");
                    }
                }
                None => {
                    if trig.gluing(tet, face).is_some() {
                        return err("target face already glued");
                    }
                    trig.glue(t, f, tet, face, perm);
                }
            }
        }
        Ok(trig)
    }

    /// Direct test for a relabelling taking `self` to `other`, without going
    /// through signatures. Both complexes must be connected.
    ///
    /// The image of tetrahedron 0 determines the rest: if a gluing `p` joins
    /// `u` to `v` and the images carry gluing `q`, the corner map of `v` must
    /// be `q * map(u) * p^-1`. So the search tries every image of
    /// tetrahedron 0 and propagates.
    pub fn is_isomorphic_to(&self, other: &Triangulation) -> bool {
        assert!(
            self.is_connected() && other.is_connected(),
            "isomorphism search is defined for connected complexes"
        );
        let n = self.size();
        if n != other.size() {
            return false;
        }
        for t0 in 0..n {
            'starts: for p0 in Perm4::all() {
                let mut image = vec![usize::MAX; n];
                let mut corner = vec![Perm4::IDENTITY; n];
                let mut taken = vec![false; n];
                image[0] = t0;
                corner[0] = p0;
                taken[t0] = true;
                let mut stack = vec![0usize];
                while let Some(u) = stack.pop() {
                    for f in 0..4u8 {
                        let (g, h) = match (self.gluing(u, f), other.gluing(image[u], corner[u].apply(f))) {
                            (None, None) => continue,
                            (Some(g), Some(h)) => (g, h),
                            _ => continue 'starts,
                        };
                        let map = g.perm.inverse().then(corner[u]).then(h.perm);
                        if image[g.tet] == usize::MAX {
                            if taken[h.tet] {
                                continue 'starts;
                            }
                            image[g.tet] = h.tet;
                            corner[g.tet] = map;
                            taken[h.tet] = true;
                            stack.push(g.tet);
                        } else if image[g.tet] != h.tet || corner[g.tet] != map {
                            continue 'starts;
                        }
                    }
                }
                // connectedness means the propagation visited every
                // tetrahedron, so the map is a bijection respecting all
                // gluings and open faces
                debug_assert!(image.iter().all(|&t| t != usize::MAX));
                return true;
            }
        }
        false
    }

    /// Applies a relabelling: tetrahedron `t` becomes `tet_map[t]` and its
    /// corners are renamed by `corner_maps[t]`.
    pub fn relabeled(&self, tet_map: &[usize], corner_maps: &[Perm4]) -> Triangulation {
        let n = self.size();
        assert_eq!(tet_map.len(), n);
        assert_eq!(corner_maps.len(), n);
        let mut seen = vec![false; n];
        for &t in tet_map {
            assert!(t < n && !seen[t], "tet_map must be a permutation");
            seen[t] = true;
        }
        let mut out = Triangulation::new(n);
        for t in 0..n {
            for f in 0..4u8 {
                let Some(g) = self.gluing(t, f) else { continue };
                let nt = tet_map[t];
                let nf = corner_maps[t].apply(f);
                let perm = corner_maps[t].inverse().then(g.perm).then(corner_maps[g.tet]);
                out.gluings[4 * nt + nf as usize] =
                    Some(super::Gluing { tet: tet_map[g.tet], face: corner_maps[g.tet].apply(g.face), perm });
            }
        }
        debug_assert!(out.check_structure().is_ok());
        out
    }
}

const DIGITS36: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

fn encode(n: usize, tokens: &[u16]) -> String {
    let mut out = alloc::format!("{n}:");
    for &token in tokens {
        if token == OPEN {
            out.push('~');
        } else {
            let code = token - 1;
            let tet = (code / 96) as usize;
            let face = ((code / 24) % 4) as usize;
            let perm = (code % 24) as usize;
            assert!(tet < 36, "signature encoding handles at most 36 tetrahedra");
            out.push(DIGITS36[tet] as char);
            out.push(DIGITS36[face] as char);
            out.push(DIGITS36[perm] as char);
        }
    }
    out
}

fn decode_tokens(body: &str, n: usize) -> Result<Vec<u16>, SigError> {
    let mut tokens = Vec::new();
    let bytes = body.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'~' {
            tokens.push(OPEN);
            i += 1;
            continue;
        }
        if i + 3 > bytes.len() {
            return err("truncated token");
        }
        let tet = digit36(bytes[i])?;
        let face = digit36(bytes[i + 1])?;
        let perm = digit36(bytes[i + 2])?;
        if tet >= n || face >= 4 || perm >= 24 {
            return err("token field out of range");
        }
        tokens.push(glued_token(tet, face as u8, Perm4::from_code(perm as u8)));
        i += 3;
    }
    Ok(tokens)
}

fn digit36(b: u8) -> Result<usize, SigError> {
    match DIGITS36.iter().position(|&d| d == b) {
        Some(v) => Ok(v),
        None => err("bad digit"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doubled_simplex() -> Triangulation {
        let mut t = Triangulation::new(2);
        for f in 0..4u8 {
            t.glue(0, f, 1, f, Perm4::IDENTITY);
        }
        t
    }

    #[test]
    fn sig_round_trips() {
        let t = doubled_simplex();
        let sig = t.iso_sig();
        let back = Triangulation::from_iso_sig(&sig).unwrap();
        assert_eq!(back.iso_sig(), sig);
    }

    #[test]
    fn sig_is_relabelling_invariant() {
        let t = doubled_simplex();
        let sig = t.iso_sig();
        let mut perms = Perm4::all();
        let (pa, pb) = (perms.nth(7).unwrap(), perms.nth(3).unwrap());
        let r = t.relabeled(&[1, 0], &[pa, pb]);
        assert_eq!(r.iso_sig(), sig);
    }

    #[test]
    fn direct_isomorphism_search_agrees_with_signatures() {
        let t = doubled_simplex();
        let mut perms = Perm4::all();
        let (pa, pb) = (perms.nth(11).unwrap(), perms.nth(17).unwrap());
        let r = t.relabeled(&[1, 0], &[pa, pb]);
        assert!(t.is_isomorphic_to(&r));
        assert!(r.is_isomorphic_to(&t));

        let mut u = Triangulation::new(2);
        for f in 0..3u8 {
            u.glue(0, f, 1, f, Perm4::IDENTITY);
        }
        u.glue(0, 3, 1, 3, Perm4::from_images([1, 2, 0, 3]));
        assert!(!t.is_isomorphic_to(&u));
        assert!(!u.is_isomorphic_to(&t));
        assert!(!t.is_isomorphic_to(&Triangulation::new(1)));
    }

    #[test]
    fn sig_distinguishes_gluings() {
        let t = doubled_simplex();
        // same shape but face 3 glued with a rotation: fewer vertex classes,
        // so certainly not isomorphic
        let mut u = Triangulation::new(2);
        for f in 0..3u8 {
            u.glue(0, f, 1, f, Perm4::IDENTITY);
        }
        u.glue(0, 3, 1, 3, Perm4::from_images([1, 2, 0, 3]));
        assert!(u.check_structure().is_ok());
        assert_ne!(u.vertex_classes().count, t.vertex_classes().count);
        assert_ne!(t.iso_sig(), u.iso_sig());
    }

    #[test]
    fn open_faces_encode_as_tildes() {
        let t = Triangulation::new(1);
        let sig = t.iso_sig();
        assert_eq!(sig, "1:~~~~");
        assert_eq!(Triangulation::from_iso_sig(&sig).unwrap(), t);
    }

    #[test]
    fn junk_sigs_are_rejected() {
        assert!(Triangulation::from_iso_sig("2").is_err());
        assert!(Triangulation::from_iso_sig("0:").is_err());
        assert!(Triangulation::from_iso_sig("1:~~~").is_err());
        assert!(Triangulation::from_iso_sig("1:~~~X").is_err());
        assert!(Triangulation::from_iso_sig("2:100~~~~~").is_err());
    }
}
