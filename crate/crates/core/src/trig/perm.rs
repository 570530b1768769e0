//! Permutations of four symbols, the corner bijections of face gluings.
//!
//! A `Perm4` is an index into the table of all 24 permutations of
//! `{0,1,2,3}`; composition, inversion and sign are table lookups.

/// Images of `0..4` under each of the 24 permutations, in lexicographic order.
const IMAGES: [[u8; 4]; 24] = build_images();

const fn build_images() -> [[u8; 4]; 24] {
    let mut out = [[0u8; 4]; 24];
    let mut count = 0;
    // lexicographic enumeration of all injective maps {0,1,2,3} -> {0,1,2,3}
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                let d = (6 - a - b - c) as i32;
                if b != a && c != a && c != b && 0 <= d && d < 4 {
                    out[count] = [a as u8, b as u8, c as u8, (6 - a - b - c) as u8];
                    count += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

const fn index_of(images: [u8; 4]) -> u8 {
    let mut i = 0;
    while i < 24 {
        if IMAGES[i][0] == images[0]
            && IMAGES[i][1] == images[1]
            && IMAGES[i][2] == images[2]
            && IMAGES[i][3] == images[3]
        {
            return i as u8;
        }
        i += 1;
    }
    unreachable!()
}

const MUL: [[u8; 24]; 24] = build_mul();

const fn build_mul() -> [[u8; 24]; 24] {
    let mut out = [[0u8; 24]; 24];
    let mut p = 0;
    while p < 24 {
        let mut q = 0;
        while q < 24 {
            // (p * q)(x) = p(q(x))
            let composed = [
                IMAGES[p][IMAGES[q][0] as usize],
                IMAGES[p][IMAGES[q][1] as usize],
                IMAGES[p][IMAGES[q][2] as usize],
                IMAGES[p][IMAGES[q][3] as usize],
            ];
            out[p][q] = index_of(composed);
            q += 1;
        }
        p += 1;
    }
    out
}

const INV: [u8; 24] = build_inv();

const fn build_inv() -> [u8; 24] {
    let mut out = [0u8; 24];
    let mut p = 0;
    while p < 24 {
        let mut inv = [0u8; 4];
        let mut x = 0;
        while x < 4 {
            inv[IMAGES[p][x] as usize] = x as u8;
            x += 1;
        }
        out[p] = index_of(inv);
        p += 1;
    }
    out
}

const SIGN: [i8; 24] = build_sign();

const fn build_sign() -> [i8; 24] {
    let mut out = [0i8; 24];
    let mut p = 0;
    while p < 24 {
        let im = IMAGES[p];
        let mut inversions = 0;
        let mut i = 0;
        while i < 4 {
            let mut j = i + 1;
            while j < 4 {
                if im[i] > im[j] {
                    inversions += 1;
                }
                j += 1;
            }
            i += 1;
        }
        out[p] = if inversions % 2 == 0 { 1 } else { -1 };
        p += 1;
    }
    out
}

/// A permutation of `{0,1,2,3}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm4(u8);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4(0);

    /// All 24 permutations in a fixed (lexicographic) order.
    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..24u8).map(Perm4)
    }

    /// Builds a permutation from the images of 0,1,2,3. Panics on a non-permutation.
    pub fn from_images(images: [u8; 4]) -> Perm4 {
        let mut seen = [false; 4];
        for &x in &images {
            assert!(x < 4 && !seen[x as usize], "not a permutation of 0..4");
            seen[x as usize] = true;
        }
        Perm4(index_of(images))
    }

    pub fn code(self) -> u8 {
        self.0
    }

    pub fn from_code(code: u8) -> Perm4 {
        assert!(code < 24);
        Perm4(code)
    }

    pub fn images(self) -> [u8; 4] {
        IMAGES[self.0 as usize]
    }

    #[inline]
    pub fn apply(self, x: u8) -> u8 {
        IMAGES[self.0 as usize][x as usize]
    }

    /// Composition: `(p.then(q)).apply(x) == q.apply(p.apply(x))`.
    #[inline]
    pub fn then(self, q: Perm4) -> Perm4 {
        Perm4(MUL[q.0 as usize][self.0 as usize])
    }

    /// Composition in the usual order: `(p.compose(q)).apply(x) == p.apply(q.apply(x))`.
    #[inline]
    pub fn compose(self, q: Perm4) -> Perm4 {
        Perm4(MUL[self.0 as usize][q.0 as usize])
    }

    #[inline]
    pub fn inverse(self) -> Perm4 {
        Perm4(INV[self.0 as usize])
    }

    #[inline]
    pub fn sign(self) -> i8 {
        SIGN[self.0 as usize]
    }

    /// The transposition of `a` and `b`.
    pub fn transposition(a: u8, b: u8) -> Perm4 {
        let mut im = [0u8, 1, 2, 3];
        im.swap(a as usize, b as usize);
        Perm4::from_images(im)
    }

    /// The six permutations sending `from` to `to`; used to enumerate the
    /// corner bijections of a gluing between face `from` and face `to`.
    pub fn sending(from: u8, to: u8) -> impl Iterator<Item = Perm4> {
        (0..24u8).map(Perm4).filter(move |p| p.apply(from) == to)
    }
}

impl core::fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let im = self.images();
        write!(f, "{}{}{}{}", im[0], im[1], im[2], im[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_consistent() {
        for p in Perm4::all() {
            for q in Perm4::all() {
                let r = p.compose(q);
                for x in 0..4 {
                    assert_eq!(r.apply(x), p.apply(q.apply(x)));
                }
                assert_eq!(p.compose(q).sign(), p.sign() * q.sign());
            }
            assert_eq!(p.compose(p.inverse()), Perm4::IDENTITY);
            assert_eq!(p.inverse().compose(p), Perm4::IDENTITY);
        }
    }

    #[test]
    fn then_is_reverse_composition() {
        for p in Perm4::all() {
            for q in Perm4::all() {
                for x in 0..4 {
                    assert_eq!(p.then(q).apply(x), q.apply(p.apply(x)));
                }
            }
        }
    }

    #[test]
    fn all_distinct() {
        let codes: std::collections::BTreeSet<_> = Perm4::all().map(|p| p.images()).collect();
        assert_eq!(codes.len(), 24);
    }

    #[test]
    fn sending_counts() {
        for f in 0..4 {
            for t in 0..4 {
                assert_eq!(Perm4::sending(f, t).count(), 6);
            }
        }
    }

    #[test]
    fn transpositions_are_odd() {
        assert_eq!(Perm4::transposition(0, 1).sign(), -1);
        assert_eq!(Perm4::transposition(2, 3).apply(2), 3);
    }
}
