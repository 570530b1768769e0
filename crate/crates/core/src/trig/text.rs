//! Plain text form of a triangulation.
//!
//! The format is `n; t.f->t.f:abcd; ...` where `n` is the number of
//! tetrahedra, each item glues two faces, and `abcd` lists the images of
//! corners 0123 under the gluing map. Each identification appears once, from
//! its lexicographically smaller side; unglued faces are simply absent.
//!
//! `2; 0.0->1.0:0123; 0.1->1.1:0123` is two tetrahedra glued along two faces
//! by the identity.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Perm4, Triangulation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "bad triangulation text: {}", self.message)
    }
}

impl core::error::Error for ParseError {}

fn err<T>(message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { message: message.into() })
}

impl Triangulation {
    pub fn to_text(&self) -> String {
        let mut out = format!("{}", self.size());
        for t in 0..self.size() {
            for f in 0..4u8 {
                let Some(g) = self.gluing(t, f) else { continue };
                if (g.tet, g.face) < (t, f) {
                    continue;
                }
                let im = g.perm.images();
                out.push_str(&format!(
                    "; {}.{}->{}.{}:{}{}{}{}",
                    t, f, g.tet, g.face, im[0], im[1], im[2], im[3]
                ));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Triangulation, ParseError> {
        let mut items = text.split(';').map(str::trim);
        let head = match items.next() {
            Some(h) if !h.is_empty() => h,
            _ => return err("missing tetrahedron count"),
        };
        let n: usize = match head.parse() {
            Ok(n) if n > 0 => n,
            _ => return err(format!("bad tetrahedron count `{head}`")),
        };
        let mut trig = Triangulation::new(n);
        for item in items {
            if item.is_empty() {
                continue;
            }
            let (ends, perm) = match item.split_once(':') {
                Some(parts) => parts,
                None => return err(format!("`{item}` has no `:perm` part")),
            };
            let (from, to) = match ends.split_once("->") {
                Some(parts) => parts,
                None => return err(format!("`{item}` has no `->`")),
            };
            let (t1, f1) = parse_side(from.trim(), n)?;
            let (t2, f2) = parse_side(to.trim(), n)?;
            let perm = parse_perm(perm.trim())?;
            if perm.apply(f1) != f2 {
                return err(format!("`{item}`: map does not send face {f1} to face {f2}"));
            }
            if t1 == t2 && f1 == f2 {
                return err(format!("`{item}` glues a face to itself"));
            }
            if trig.gluing(t1, f1).is_some() || trig.gluing(t2, f2).is_some() {
                return err(format!("`{item}` reglues an already glued face"));
            }
            trig.glue(t1, f1, t2, f2, perm);
        }
        Ok(trig)
    }
}

fn parse_side(side: &str, n: usize) -> Result<(usize, u8), ParseError> {
    let Some((t, f)) = side.split_once('.') else {
        return err(format!("`{side}` is not of the form tet.face"));
    };
    let tet: usize = match t.parse() {
        Ok(t) => t,
        Err(_) => return err(format!("bad tetrahedron index `{t}`")),
    };
    if tet >= n {
        return err(format!("tetrahedron index {tet} out of range for size {n}"));
    }
    let face: u8 = match f.parse() {
        Ok(f) if f < 4 => f,
        _ => return err(format!("bad face index `{f}`")),
    };
    Ok((tet, face))
}

fn parse_perm(text: &str) -> Result<Perm4, ParseError> {
    let digits: Vec<u8> = text.bytes().map(|b| b.wrapping_sub(b'0')).collect();
    if digits.len() != 4 || digits.iter().any(|&d| d > 3) {
        return err(format!("`{text}` is not four digits 0-3"));
    }
    let mut seen = [false; 4];
    for &d in &digits {
        if seen[d as usize] {
            return err(format!("`{text}` repeats a corner"));
        }
        seen[d as usize] = true;
    }
    Ok(Perm4::from_images([digits[0], digits[1], digits[2], digits[3]]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::Gluing;

    #[test]
    fn round_trip() {
        let mut t = Triangulation::new(2);
        for f in 0..4u8 {
            t.glue(0, f, 1, f, Perm4::IDENTITY);
        }
        let text = t.to_text();
        assert_eq!(text, "2; 0.0->1.0:0123; 0.1->1.1:0123; 0.2->1.2:0123; 0.3->1.3:0123");
        assert_eq!(Triangulation::from_text(&text).unwrap(), t);
    }

    #[test]
    fn parses_partial_and_spaced_input() {
        let t = Triangulation::from_text(" 3 ;  0.0 -> 1.1 : 1032 ").unwrap();
        assert_eq!(t.size(), 3);
        assert_eq!(
            t.gluing(0, 0),
            Some(Gluing { tet: 1, face: 1, perm: Perm4::from_images([1, 0, 3, 2]) })
        );
        assert_eq!(t.open_faces().count(), 10);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(Triangulation::from_text("").is_err());
        assert!(Triangulation::from_text("0").is_err());
        assert!(Triangulation::from_text("1; 0.0->0.0:0123").is_err());
        assert!(Triangulation::from_text("1; 0.0->0.1:0123").is_err()); // map fixes face 0
        assert!(Triangulation::from_text("2; 0.0->1.0:0113").is_err());
        assert!(Triangulation::from_text("2; 0.5->1.0:0123").is_err());
        assert!(Triangulation::from_text("2; 0.0->1.0:0123; 0.0->1.1:1023").is_err());
    }
}
