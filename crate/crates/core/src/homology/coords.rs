//! Coordinates of 1-cycles in the free part of first homology.

use alloc::vec;
use alloc::vec::Vec;

use crate::homology::snf::{snf, IMat, Snf};
use crate::homology::{boundary_maps, AbGroup};
use crate::trig::Triangulation;

/// Expresses integer 1-cycles of a complex in a fixed basis of the free part
/// of its first homology.
///
/// Built once per complex from the boundary maps; `free_coords` then maps any
/// vector in ker d1 to its coordinates. Vectors outside the kernel are a
/// caller bug and panic.
pub struct H1Coords {
    /// columns span ker d1; primitive, so the solve below is exact
    kernel: IMat,
    ksnf: Snf,
    /// row transform of the smith form of im d2 written in kernel coordinates
    xu: IMat,
    xrank: usize,
    pub group: AbGroup,
}

impl H1Coords {
    pub fn of(t: &Triangulation) -> H1Coords {
        let (d1, d2) = boundary_maps(t);
        H1Coords::new(&d1, &d2)
    }

    pub fn new(d1: &IMat, d2: &IMat) -> H1Coords {
        let edges = d1.cols;
        let s1 = snf(d1);
        let r1 = s1.rank();
        let k = edges - r1;

        // kernel basis: the columns of v transported past the rank
        let mut kernel = IMat::zero(edges, k);
        for j in 0..k {
            for i in 0..edges {
                *kernel.at_mut(i, j) = s1.v.at(i, r1 + j);
            }
        }
        let ksnf = snf(&kernel);
        debug_assert_eq!(ksnf.rank(), k);
        debug_assert!(ksnf.factors.iter().all(|&f| f == 1), "kernel basis is primitive");

        // image of d2 in kernel coordinates
        let mut x = IMat::zero(k, d2.cols);
        for j in 0..d2.cols {
            let col: Vec<i128> = (0..edges).map(|i| d2.at(i, j)).collect();
            let xc = solve_in_kernel(&ksnf, &col);
            for i in 0..k {
                *x.at_mut(i, j) = xc[i];
            }
        }
        let xs = snf(&x);
        let xrank = xs.rank();
        let torsion = xs.torsion().iter().map(|&f| f as u64).collect();
        let group = AbGroup { rank: k - xrank, torsion };

        H1Coords { kernel, ksnf, xu: xs.u, xrank, group }
    }

    pub fn free_rank(&self) -> usize {
        self.group.rank
    }

    /// Coordinates of a cycle in the free part of H1. Torsion components are
    /// dropped; the zero vector comes back for torsion classes.
    pub fn free_coords(&self, cycle: &[i128]) -> Vec<i128> {
        assert_eq!(cycle.len(), self.kernel.rows);
        let x = solve_in_kernel(&self.ksnf, cycle);
        let w = mat_vec(&self.xu, &x);
        w[self.xrank..].to_vec()
    }
}

/// Solves kernel * x = z exactly via the stored smith form.
fn solve_in_kernel(ksnf: &Snf, z: &[i128]) -> Vec<i128> {
    let k = ksnf.d.cols;
    let uz = mat_vec(&ksnf.u, z);
    let mut y = vec![0i128; k];
    for i in 0..k {
        let d = ksnf.d.at(i, i);
        assert_eq!(uz[i] % d, 0, "kernel solve must be exact");
        y[i] = uz[i] / d;
    }
    for (i, &v) in uz.iter().enumerate().skip(k) {
        assert_eq!(v, 0, "vector outside ker d1; not a cycle (row {})", i);
    }
    mat_vec(&ksnf.v, &y)
}

fn mat_vec(m: &IMat, v: &[i128]) -> Vec<i128> {
    assert_eq!(m.cols, v.len());
    (0..m.rows)
        .map(|i| {
            (0..m.cols).fold(0i128, |acc, j| {
                acc.checked_add(m.at(i, j).checked_mul(v[j]).expect("integer overflow in matrix arithmetic"))
                    .expect("integer overflow in matrix arithmetic")
            })
        })
        .collect()
}
