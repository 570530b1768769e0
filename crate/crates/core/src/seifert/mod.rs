//! Seifert invariants in exact rational arithmetic.
//!
//! A fibered space is recorded as a base symbol, a list of exceptional fiber
//! slopes `(p, q)`, an integer twist `b`, and a flag selecting the second
//! circle-bundle class where the base admits one. Eleven base symbols cover
//! everything this census meets: the sphere, projective plane, torus, Klein
//! bottle, disc, annulus and Moebius band, plus four quotients with mirror
//! boundary. `Dbar` is the disc with mirror boundary circle (the sphere
//! modulo a reflection, a closed orbifold), `Ddot` has one mirror arc and
//! one true arc, `Dddot` alternates two mirror arcs with two true arcs, and
//! `Abar` is the annulus with one circle mirrored.
//!
//! Two rational invariants drive everything. The orbifold characteristic of
//! the base is the bare characteristic minus `1 - 1/p` per cone point, where
//! mirrored symbols carry half the characteristic of their doubles. The
//! Euler number of a closed fibration with orientable total space is the
//! twist plus the sum of the slopes; when the total space is non-orientable
//! the invariant is only defined up to sign and vanishes identically. The
//! pair (sign of the characteristic, vanishing of the Euler number) places
//! every closed fibered space into one of six geometries.
//!
//! On top of the invariants sit the census filters: enumeration of the base
//! orbifolds with characteristic in a small negative window, the congruence
//! deciding which cone orders admit slopes with vanishing Euler number, the
//! mapping class orbits that count interval bundles over the torus and the
//! Klein bottle, and the filter that decides which orientable records admit
//! a fixed-point-free orientation-reversing symmetry compatible with the
//! fibration, by reconstructing the candidate quotients and doubling them
//! back.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;

use crate::solbundle::{
    bundle_geometry, bundles_equivalent, tr_square_identity, BundleGeometry, Mat2,
};

fn rat(n: i64, d: i64) -> Ratio<i64> {
    Ratio::new(n, d)
}

fn floor_ratio(r: Ratio<i64>) -> i64 {
    r.floor().to_integer()
}

/// The compact 2-orbifolds that occur as bases of fibered spaces here.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseSymbol {
    S2,
    RP2,
    T,
    K,
    D,
    Dbar,
    Ddot,
    Dddot,
    A,
    Abar,
    S,
}

impl BaseSymbol {
    pub const ALL: [BaseSymbol; 11] = [
        BaseSymbol::S2,
        BaseSymbol::RP2,
        BaseSymbol::T,
        BaseSymbol::K,
        BaseSymbol::D,
        BaseSymbol::Dbar,
        BaseSymbol::Ddot,
        BaseSymbol::Dddot,
        BaseSymbol::A,
        BaseSymbol::Abar,
        BaseSymbol::S,
    ];

    /// Orbifold Euler characteristic before cone points. Doubling a mirrored
    /// symbol along its mirror locus recovers an honest surface, and the
    /// quotient carries half the characteristic of the double: the mirrored
    /// disc halves the sphere, `Ddot` halves the disc, `Dddot` and the
    /// mirrored annulus halve the annulus.
    pub fn bare_chi(self) -> Ratio<i64> {
        match self {
            BaseSymbol::S2 => rat(2, 1),
            BaseSymbol::RP2 | BaseSymbol::D | BaseSymbol::Dbar => rat(1, 1),
            BaseSymbol::Ddot => rat(1, 2),
            BaseSymbol::T
            | BaseSymbol::K
            | BaseSymbol::Dddot
            | BaseSymbol::A
            | BaseSymbol::Abar
            | BaseSymbol::S => rat(0, 1),
        }
    }

    /// Number of true (non-mirror) boundary components. Mirror boundary is
    /// interior to the orbifold, so the mirrored disc is closed, while
    /// `Ddot` and the mirrored annulus keep one true component and `Dddot`
    /// keeps two.
    pub fn boundary_circles(self) -> u8 {
        match self {
            BaseSymbol::S2 | BaseSymbol::RP2 | BaseSymbol::T | BaseSymbol::K | BaseSymbol::Dbar => {
                0
            }
            BaseSymbol::D | BaseSymbol::Ddot | BaseSymbol::Abar | BaseSymbol::S => 1,
            BaseSymbol::Dddot | BaseSymbol::A => 2,
        }
    }

    pub fn is_closed(self) -> bool {
        self.boundary_circles() == 0
    }

    /// Whether the base carries a second fibration class to twist by: a
    /// second circle bundle over the annulus, its mirrored version and the
    /// Moebius band, and the fiber-reversing class with orientable total
    /// space over the projective plane, the Klein bottle and the mirrored
    /// disc.
    pub fn admits_twisted(self) -> bool {
        matches!(
            self,
            BaseSymbol::A
                | BaseSymbol::Abar
                | BaseSymbol::S
                | BaseSymbol::RP2
                | BaseSymbol::K
                | BaseSymbol::Dbar
        )
    }
}

impl fmt::Display for BaseSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BaseSymbol::S2 => "S2",
            BaseSymbol::RP2 => "RP2",
            BaseSymbol::T => "T",
            BaseSymbol::K => "K",
            BaseSymbol::D => "D",
            BaseSymbol::Dbar => "Dbar",
            BaseSymbol::Ddot => "Ddot",
            BaseSymbol::Dddot => "Dddot",
            BaseSymbol::A => "A",
            BaseSymbol::Abar => "Abar",
            BaseSymbol::S => "S",
        };
        write!(f, "{s}")
    }
}

impl FromStr for BaseSymbol {
    type Err = String;

    fn from_str(s: &str) -> Result<BaseSymbol, String> {
        for sym in BaseSymbol::ALL {
            if s == sym.to_string() {
                return Ok(sym);
            }
        }
        Err(format!("unknown base symbol `{s}`"))
    }
}

/// A base symbol with its multiset of cone orders, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseOrbifold {
    pub symbol: BaseSymbol,
    pub cone: Vec<u32>,
}

impl BaseOrbifold {
    pub fn new(symbol: BaseSymbol, mut cone: Vec<u32>) -> Result<BaseOrbifold, SeifertError> {
        for &p in &cone {
            if p < 2 {
                return Err(SeifertError::BadCone { p });
            }
        }
        cone.sort_unstable();
        Ok(BaseOrbifold { symbol, cone })
    }

    /// Orbifold Euler characteristic: bare value minus `1 - 1/p` per cone.
    pub fn chi(&self) -> Ratio<i64> {
        let mut x = self.symbol.bare_chi();
        for &p in &self.cone {
            x -= rat(i64::from(p) - 1, i64::from(p));
        }
        x
    }
}

impl fmt::Display for BaseOrbifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        if !self.cone.is_empty() {
            write!(f, "(")?;
            for (i, p) in self.cone.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeifertError {
    /// A fiber slope needs p >= 2 and gcd(p, q) = 1.
    BadFiber { p: u32, q: i64 },
    /// Cone orders must be at least 2.
    BadCone { p: u32 },
    /// The base carries no second fibration class to twist by.
    NoTwistedClass { base: BaseSymbol },
    /// An integer twist is only meaningful on a closed orientable total
    /// space.
    StrayTwist,
    /// The operation needs a closed fibered space.
    NotClosed,
    /// The operation needs an orientable total space.
    NotOrientable,
    /// The total space is already orientable; nothing to cover or quotient.
    AlreadyOrientable,
    /// Blocks glued to an interval bundle must fiber over the disc.
    BlockBase { got: BaseSymbol },
    /// Only the twisted interval bundle over the torus takes a block here.
    UnsupportedBundle,
    /// The enumeration threshold must lie strictly between -1/2 and 0; from
    /// -1/2 downward the families stop being one-parameter.
    BadThreshold,
    /// Decomposition blocks must be bounded with negative characteristic.
    BadBlock,
    /// Block boundaries do not match the cut surfaces.
    CutArity { ends: usize, expected: usize },
    /// The stated geometry contradicts the structure data.
    Inconsistent,
    /// The bundle class search outgrew its state budget.
    MonodromyBudget,
}

impl fmt::Display for SeifertError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeifertError::BadFiber { p, q } => {
                write!(f, "fiber ({p},{q}) needs p >= 2 and gcd(p, q) = 1")
            }
            SeifertError::BadCone { p } => write!(f, "cone order {p} must be at least 2"),
            SeifertError::NoTwistedClass { base } => {
                write!(f, "base {base} has no twisted fibration class")
            }
            SeifertError::StrayTwist => write!(
                f,
                "integer twist outside a closed orientable total space"
            ),
            SeifertError::NotClosed => write!(f, "needs a closed fibered space"),
            SeifertError::NotOrientable => write!(f, "needs an orientable total space"),
            SeifertError::AlreadyOrientable => {
                write!(f, "total space is already orientable")
            }
            SeifertError::BlockBase { got } => {
                write!(f, "block must fiber over the disc, got {got}")
            }
            SeifertError::UnsupportedBundle => write!(
                f,
                "only the twisted interval bundle over the torus takes a block"
            ),
            SeifertError::BadThreshold => {
                write!(f, "threshold must lie strictly between -1/2 and 0")
            }
            SeifertError::BadBlock => write!(
                f,
                "decomposition blocks must be bounded with negative characteristic"
            ),
            SeifertError::CutArity { ends, expected } => write!(
                f,
                "{ends} block boundary components against {expected} cut slots"
            ),
            SeifertError::Inconsistent => {
                write!(f, "stated geometry contradicts the structure data")
            }
            SeifertError::MonodromyBudget => {
                write!(f, "bundle class search outgrew its state budget")
            }
        }
    }
}

impl core::error::Error for SeifertError {}

/// Seifert data: base symbol, exceptional fiber slopes, integer twist, and
/// the class flag. Text form `base; (p1,q1)(p2,q2)...; b` with `-` for an
/// empty fiber list and a trailing `~` selecting the twisted class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeifertData {
    pub base: BaseOrbifold,
    pub fibers: Vec<(u32, i64)>,
    pub b: i64,
    pub twisted: bool,
}

impl SeifertData {
    pub fn new(
        symbol: BaseSymbol,
        fibers: Vec<(u32, i64)>,
        b: i64,
        twisted: bool,
    ) -> Result<SeifertData, SeifertError> {
        for &(p, q) in &fibers {
            if p < 2 || i64::from(p).gcd(&q) != 1 {
                return Err(SeifertError::BadFiber { p, q });
            }
        }
        if twisted && !symbol.admits_twisted() {
            return Err(SeifertError::NoTwistedClass { base: symbol });
        }
        let mut cone: Vec<u32> = fibers.iter().map(|&(p, _)| p).collect();
        cone.sort_unstable();
        let sd = SeifertData {
            base: BaseOrbifold { symbol, cone },
            fibers,
            b,
            twisted,
        };
        if b != 0 && !(sd.is_closed() && orientable_total_space(&sd)) {
            return Err(SeifertError::StrayTwist);
        }
        Ok(sd)
    }

    pub fn is_closed(&self) -> bool {
        self.base.symbol.is_closed()
    }
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; ", self.base.symbol)?;
        if self.fibers.is_empty() {
            write!(f, "-")?;
        } else {
            for &(p, q) in &self.fibers {
                write!(f, "({p},{q})")?;
            }
        }
        write!(f, "; {}", self.b)?;
        if self.twisted {
            write!(f, "~")?;
        }
        Ok(())
    }
}

impl FromStr for SeifertData {
    type Err = String;

    fn from_str(s: &str) -> Result<SeifertData, String> {
        let parts: Vec<&str> = s.split(';').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("`{s}` must have three `;`-separated fields"));
        }
        let symbol: BaseSymbol = parts[0].parse()?;
        let mut fibers = Vec::new();
        if parts[1] != "-" {
            let body: String = parts[1].chars().filter(|c| !c.is_whitespace()).collect();
            let inner = body
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| format!("bad fiber list `{}`", parts[1]))?;
            for pair in inner.split(")(") {
                let (ps, qs) = pair
                    .split_once(',')
                    .ok_or_else(|| format!("bad fiber `{pair}`"))?;
                let p: u32 = ps.parse().map_err(|_| format!("bad fiber order `{ps}`"))?;
                let q: i64 = qs.parse().map_err(|_| format!("bad fiber slope `{qs}`"))?;
                fibers.push((p, q));
            }
        }
        let (bs, twisted) = match parts[2].strip_suffix('~') {
            Some(head) => (head.trim_end(), true),
            None => (parts[2], false),
        };
        let b: i64 = bs.parse().map_err(|_| format!("bad twist `{bs}`"))?;
        SeifertData::new(symbol, fibers, b, twisted).map_err(|e| e.to_string())
    }
}

/// Whether the total space is orientable. Over the plain orientable bases
/// the listed class is orientable; over the annulus the twist flips into
/// the non-orientable circle bundle and over the Moebius band into the
/// orientable one; over the projective plane, the Klein bottle and the
/// mirrored disc only the twisted, fiber-reversing class has orientable
/// total space. The remaining mirrored bases never do.
pub fn orientable_total_space(sd: &SeifertData) -> bool {
    match sd.base.symbol {
        BaseSymbol::S2 | BaseSymbol::T | BaseSymbol::D => true,
        BaseSymbol::A => !sd.twisted,
        BaseSymbol::S => sd.twisted,
        BaseSymbol::RP2 | BaseSymbol::K | BaseSymbol::Dbar => sd.twisted,
        BaseSymbol::Abar | BaseSymbol::Ddot | BaseSymbol::Dddot => false,
    }
}

/// Euler number of the fibration: the twist plus the sum of the slopes.
/// For a closed space with non-orientable total space the invariant is only
/// defined up to sign and vanishes identically, so it comes back zero.
pub fn euler_number(sd: &SeifertData) -> Ratio<i64> {
    if sd.is_closed() && !orientable_total_space(sd) {
        return rat(0, 1);
    }
    let mut e = Ratio::from_integer(sd.b);
    for &(p, q) in &sd.fibers {
        e += rat(q, i64::from(p));
    }
    e
}

/// Orbifold Euler characteristic of the base.
pub fn chi_orb(sd: &SeifertData) -> Ratio<i64> {
    sd.base.chi()
}

/// The six geometries of closed fibered spaces plus the two this census
/// meets without a fibration.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Geometry {
    S3,
    S2xR,
    E3,
    Nil,
    H2xR,
    SL2R,
    Sol,
    Hyp,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Geometry::S3 => "S3",
            Geometry::S2xR => "S2xR",
            Geometry::E3 => "E3",
            Geometry::Nil => "Nil",
            Geometry::H2xR => "H2xR",
            Geometry::SL2R => "SL2R",
            Geometry::Sol => "Sol",
            Geometry::Hyp => "Hyp",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Geometry {
    type Err = String;

    fn from_str(s: &str) -> Result<Geometry, String> {
        Ok(match s {
            "S3" => Geometry::S3,
            "S2xR" => Geometry::S2xR,
            "E3" => Geometry::E3,
            "Nil" => Geometry::Nil,
            "H2xR" => Geometry::H2xR,
            "SL2R" => Geometry::SL2R,
            "Sol" => Geometry::Sol,
            "Hyp" => Geometry::Hyp,
            _ => return Err(format!("unknown geometry `{s}`")),
        })
    }
}

/// Geometry of a closed fibered space, from the sign of the base
/// characteristic and the vanishing of the Euler number.
pub fn classify_geometry(sd: &SeifertData) -> Result<Geometry, SeifertError> {
    if !sd.is_closed() {
        return Err(SeifertError::NotClosed);
    }
    let zero = rat(0, 1);
    let e_zero = euler_number(sd) == zero;
    Ok(match (chi_orb(sd).cmp(&zero), e_zero) {
        (Ordering::Greater, false) => Geometry::S3,
        (Ordering::Greater, true) => Geometry::S2xR,
        (Ordering::Equal, false) => Geometry::Nil,
        (Ordering::Equal, true) => Geometry::E3,
        (Ordering::Less, false) => Geometry::SL2R,
        (Ordering::Less, true) => Geometry::H2xR,
    })
}

/// Canonical presentation of a closed fibration with orientable total
/// space: slopes reduced into [1, p-1] with the integer parts folded into
/// the twist, fibers sorted.
pub fn normal_form(sd: &SeifertData) -> Result<SeifertData, SeifertError> {
    if !sd.is_closed() {
        return Err(SeifertError::NotClosed);
    }
    if !orientable_total_space(sd) {
        return Err(SeifertError::NotOrientable);
    }
    let mut b = sd.b;
    let mut fibers: Vec<(u32, i64)> = Vec::with_capacity(sd.fibers.len());
    for &(p, q) in &sd.fibers {
        let pp = i64::from(p);
        let r = q.rem_euclid(pp);
        b += (q - r) / pp;
        fibers.push((p, r));
    }
    fibers.sort_unstable();
    let cone = fibers.iter().map(|&(p, _)| p).collect();
    Ok(SeifertData {
        base: BaseOrbifold {
            symbol: sd.base.symbol,
            cone,
        },
        fibers,
        b,
        twisted: sd.twisted,
    })
}

/// Normal form after reversing the fiber orientation: slopes flip sign, so
/// in reduced terms (p, q) becomes (p, p - q) and the twist picks up -1 per
/// fiber on top of its own sign flip.
fn reversed(nf: &SeifertData) -> SeifertData {
    let k = nf.fibers.len() as i64;
    let mut fibers: Vec<(u32, i64)> = nf
        .fibers
        .iter()
        .map(|&(p, q)| (p, i64::from(p) - q))
        .collect();
    fibers.sort_unstable();
    SeifertData {
        base: nf.base.clone(),
        fibers,
        b: -nf.b - k,
        twisted: nf.twisted,
    }
}

/// Canonical presentation of a closed fibration with non-orientable total
/// space. Slopes are only defined up to sign there, so each reduces to
/// min(q mod p, p - q mod p); the twist is forced to zero already.
pub fn quotient_normal_form(sd: &SeifertData) -> Result<SeifertData, SeifertError> {
    if !sd.is_closed() {
        return Err(SeifertError::NotClosed);
    }
    if orientable_total_space(sd) {
        return Err(SeifertError::AlreadyOrientable);
    }
    let mut fibers: Vec<(u32, i64)> = sd
        .fibers
        .iter()
        .map(|&(p, q)| {
            let pp = i64::from(p);
            let r = q.rem_euclid(pp);
            (p, r.min(pp - r))
        })
        .collect();
    fibers.sort_unstable();
    let cone = fibers.iter().map(|&(p, _)| p).collect();
    Ok(SeifertData {
        base: BaseOrbifold {
            symbol: sd.base.symbol,
            cone,
        },
        fibers,
        b: 0,
        twisted: sd.twisted,
    })
}

/// Whether two presentations denote the same fibered space: equal normal
/// forms, possibly after a fiber orientation reversal, or equal quotient
/// normal forms when both total spaces are non-orientable. An orientable
/// and a non-orientable total space are never the same space.
pub fn same_fibered_space(x: &SeifertData, y: &SeifertData) -> Result<bool, SeifertError> {
    if !x.is_closed() || !y.is_closed() {
        return Err(SeifertError::NotClosed);
    }
    match (orientable_total_space(x), orientable_total_space(y)) {
        (true, true) => {
            let nx = normal_form(x)?;
            let ny = normal_form(y)?;
            Ok(nx == ny || nx == reversed(&ny))
        }
        (false, false) => Ok(quotient_normal_form(x)? == quotient_normal_form(y)?),
        _ => Ok(false),
    }
}

/// A one-parameter family of base orbifolds: fixed cone orders plus a final
/// cone ranging over [last_min, last_max], unbounded when last_max is None.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbifoldFamily {
    pub base: BaseSymbol,
    pub cone: Vec<u32>,
    pub last_min: u32,
    pub last_max: Option<u32>,
}

impl OrbifoldFamily {
    /// Every orbifold in the family; None when the family is unbounded.
    pub fn instances(&self) -> Option<Vec<BaseOrbifold>> {
        let hi = self.last_max?;
        Some(
            (self.last_min..=hi)
                .map(|p| {
                    let mut cone = self.cone.clone();
                    cone.push(p);
                    BaseOrbifold {
                        symbol: self.base,
                        cone,
                    }
                })
                .collect(),
        )
    }
}

impl fmt::Display for OrbifoldFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.base)?;
        for p in &self.cone {
            write!(f, "{p},")?;
        }
        match self.last_max {
            Some(hi) if hi == self.last_min => write!(f, "{})", self.last_min),
            Some(hi) => write!(f, "{}..{})", self.last_min, hi),
            None => write!(f, "{}..)", self.last_min),
        }
    }
}

/// All base orbifolds with characteristic in [threshold, 0), grouped into
/// one-parameter families over the three closed bases that can carry a
/// negative characteristic this close to zero: the sphere, the projective
/// plane and the mirrored disc. Each cone point eats `1 - 1/p` of the bare
/// characteristic, at least a half, which pins the cone count to a window
/// and every cone order to a rational interval; only the last, largest
/// order may stay unbounded. Thresholds at or below -1/2 would open
/// two-parameter families, hence the strict (-1/2, 0) requirement.
pub fn enumerate_small_orbifolds(
    threshold: Ratio<i64>,
) -> Result<Vec<OrbifoldFamily>, SeifertError> {
    if threshold <= rat(-1, 2) || threshold >= rat(0, 1) {
        return Err(SeifertError::BadThreshold);
    }
    let mut out = Vec::new();
    for &(symbol, c) in &[
        (BaseSymbol::S2, 2i64),
        (BaseSymbol::RP2, 1i64),
        (BaseSymbol::Dbar, 1i64),
    ] {
        // the cone contributions must sum into (c, c - t], each one lands
        // in [1/2, 1), so the count k satisfies c < k <= 2(c - t)
        let kmax = floor_ratio(rat(2, 1) * (Ratio::from_integer(c) - threshold));
        for k in (c + 1)..=kmax {
            let mut prefix = Vec::new();
            descend(
                symbol,
                c,
                threshold,
                k as usize,
                &mut prefix,
                rat(0, 1),
                2,
                &mut out,
            );
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    symbol: BaseSymbol,
    c: i64,
    t: Ratio<i64>,
    remaining: usize,
    prefix: &mut Vec<u32>,
    sum: Ratio<i64>,
    min_p: u32,
    out: &mut Vec<OrbifoldFamily>,
) {
    let zero = rat(0, 1);
    let one = rat(1, 1);
    if remaining == 1 {
        // the last reciprocal must land in [m_lt + t, m_lt)
        let m_lt = one - Ratio::from_integer(c) + sum;
        if m_lt <= zero {
            return;
        }
        let lo = core::cmp::max(i64::from(min_p), floor_ratio(m_lt.recip()) + 1);
        let m_ge = m_lt + t;
        let last_max = if m_ge <= zero {
            None
        } else {
            let hi = floor_ratio(m_ge.recip());
            if hi < lo {
                return;
            }
            Some(hi as u32)
        };
        out.push(OrbifoldFamily {
            base: symbol,
            cone: prefix.clone(),
            last_min: lo as u32,
            last_max,
        });
        return;
    }
    // the remaining r reciprocals must sum into [d + t, d); the current
    // order is the smallest of them, so 1/p < d and r/p >= d + t
    let r = Ratio::from_integer(remaining as i64);
    let d = sum + r - Ratio::from_integer(c);
    if d <= zero {
        return;
    }
    let u = d + t;
    debug_assert!(u > zero, "threshold window keeps interior slots bounded");
    let lo = core::cmp::max(i64::from(min_p), floor_ratio(d.recip()) + 1);
    let hi = floor_ratio(r / u);
    let mut p = lo;
    while p <= hi {
        prefix.push(p as u32);
        descend(
            symbol,
            c,
            t,
            remaining - 1,
            prefix,
            sum + (one - rat(1, p)),
            p as u32,
            out,
        );
        prefix.pop();
        p += 1;
    }
}

/// Outcome of the slope search for a vanishing Euler number over given cone
/// orders, for fibrations with orientable total space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EulerZero {
    /// Coprime slopes summing to zero, one per cone.
    Realizable { q: Vec<i64> },
    /// Some order divides no product of the others, which already forbids a
    /// vanishing sum; index of the first offender.
    Divisibility { index: usize },
    /// Divisibility holds but the congruence has no solution.
    NoSolution,
}

/// Decides whether coprime slopes over the given cone orders can sum to an
/// integer, i.e. whether the orders carry a closed fibration with
/// orientable total space and vanishing Euler number. Clearing denominators
/// shows each order must divide the product of the others; past that filter
/// the residues are searched outright, and a witness is assembled by
/// folding the integer part into the first slope.
pub fn e_zero_realizable(ps: &[u32]) -> Result<EulerZero, SeifertError> {
    for &p in ps {
        if p < 2 {
            return Err(SeifertError::BadCone { p });
        }
    }
    for (i, &p) in ps.iter().enumerate() {
        let pi = i64::from(p);
        let mut prod = 1i64;
        for (j, &pj) in ps.iter().enumerate() {
            if j != i {
                prod = (prod * (i64::from(pj) % pi)) % pi;
            }
        }
        if prod != 0 {
            return Ok(EulerZero::Divisibility { index: i });
        }
    }
    let mut l: i64 = 1;
    for &p in ps {
        l = l.lcm(&i64::from(p));
    }
    let weights: Vec<i64> = ps.iter().map(|&p| l / i64::from(p)).collect();
    let mut res: Vec<i64> = vec![1; ps.len()];
    loop {
        let s: i64 = res.iter().zip(&weights).map(|(r, w)| r * w).sum();
        if s % l == 0 {
            let mut q = res.clone();
            let m = s / l;
            if let Some(q0) = q.first_mut() {
                *q0 -= m * i64::from(ps[0]);
            }
            return Ok(EulerZero::Realizable { q });
        }
        // odometer over residues coprime to their orders
        let mut i = 0;
        loop {
            if i == ps.len() {
                return Ok(EulerZero::NoSolution);
            }
            let p = i64::from(ps[i]);
            res[i] += 1;
            while res[i] < p && p.gcd(&res[i]) != 1 {
                res[i] += 1;
            }
            if res[i] < p {
                break;
            }
            res[i] = 1;
            i += 1;
        }
    }
}

/// The instances of a family whose cone orders admit slopes with vanishing
/// Euler number, with witness slopes. An unbounded family still has only
/// finitely many candidates: the last order must divide the product of the
/// fixed ones.
pub fn e_zero_instances(fam: &OrbifoldFamily) -> Result<Vec<(u32, Vec<i64>)>, SeifertError> {
    let mut lasts: Vec<u32> = Vec::new();
    match fam.last_max {
        Some(hi) => lasts.extend(fam.last_min..=hi),
        None => {
            let prod: u128 = fam.cone.iter().map(|&p| u128::from(p)).product();
            let mut divisors: Vec<u128> = Vec::new();
            let mut i: u128 = 1;
            while i * i <= prod {
                if prod % i == 0 {
                    divisors.push(i);
                    if i != prod / i {
                        divisors.push(prod / i);
                    }
                }
                i += 1;
            }
            divisors.sort_unstable();
            for d in divisors {
                if d >= u128::from(fam.last_min) {
                    if let Ok(p) = u32::try_from(d) {
                        lasts.push(p);
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for p in lasts {
        let mut ps = fam.cone.clone();
        ps.push(p);
        if let EulerZero::Realizable { q } = e_zero_realizable(&ps)? {
            out.push((p, q));
        }
    }
    Ok(out)
}

/// The two closed surfaces whose interval bundles matter here.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClosedSurface {
    Torus,
    Klein,
}

/// Orbits of the mapping class group on H^1(F; Z/2), the classes labelling
/// interval bundles over F. Generators act by their integral images on
/// first homology reduced mod 2 - Dehn twists along the two core curves of
/// the torus, and on the Klein bottle group <a, b | 2a = 0> the maps fixing
/// a and sending b to -b respectively a + b. Orbits close under
/// breadth-first search; their count is the number of interval bundles over
/// F up to equivalence.
pub fn ibundle_orbits(surface: ClosedSurface) -> Vec<Vec<(u8, u8)>> {
    let gens: &[[(i64, i64); 2]] = match surface {
        ClosedSurface::Torus => &[[(1, 0), (1, 1)], [(1, 1), (0, 1)]],
        ClosedSurface::Klein => &[[(1, 0), (0, -1)], [(1, 0), (1, 1)]],
    };
    let classes: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];
    let idx = |v: (u8, u8)| (2 * v.0 + v.1) as usize;
    // precomposition: the pulled-back class evaluates v on the images
    let act = |v: (u8, u8), g: &[(i64, i64); 2]| -> (u8, u8) {
        let va = (i64::from(v.0) * g[0].0 + i64::from(v.1) * g[0].1).rem_euclid(2);
        let vb = (i64::from(v.0) * g[1].0 + i64::from(v.1) * g[1].1).rem_euclid(2);
        (va as u8, vb as u8)
    };
    let mut seen = [false; 4];
    let mut orbits: Vec<Vec<(u8, u8)>> = Vec::new();
    for &start in &classes {
        if seen[idx(start)] {
            continue;
        }
        seen[idx(start)] = true;
        let mut orbit = vec![start];
        let mut frontier = vec![start];
        while let Some(v) = frontier.pop() {
            for g in gens {
                let w = act(v, g);
                if !seen[idx(w)] {
                    seen[idx(w)] = true;
                    orbit.push(w);
                    frontier.push(w);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// The interval bundles over the torus and the Klein bottle. `TxtI` is the
/// twisted bundle over the torus; the Klein bottle carries two inequivalent
/// twisted bundles, `KxtI` with orientable total space and torus boundary
/// and `KxttI`, non-orientable with Klein bottle boundary.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IBundle {
    TxI,
    TxtI,
    KxI,
    KxtI,
    KxttI,
}

impl fmt::Display for IBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IBundle::TxI => "TxI",
            IBundle::TxtI => "Tx~I",
            IBundle::KxI => "KxI",
            IBundle::KxtI => "Kx~I",
            IBundle::KxttI => "Kx~~I",
        };
        write!(f, "{s}")
    }
}

/// What the census needs to know about an interval bundle: orientability,
/// boundary, the fibrations it carries as a fibered space, and whether
/// every fibration of the boundary extends inside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IBundleFacts {
    pub bundle: IBundle,
    pub orientable: bool,
    pub boundary_tori: u8,
    pub boundary_kleins: u8,
    pub fibrations: Vec<SeifertData>,
    pub boundary_fibrations_extend: bool,
}

/// The five interval bundles with their fibrations. The product bundles
/// fiber over the annulus respectively, for the Klein bottle, over the
/// twisted annulus bundle and the doubly mirrored disc; the twisted torus
/// bundle fibers over the Moebius band and the mirrored annulus; `KxtI`
/// over the twisted Moebius class and the disc with two order-2 cones; and
/// `KxttI` over the twisted mirrored annulus and the half-mirrored disc
/// with one order-2 cone. Every fibration of the boundary extends except on
/// `KxtI`, whose boundary torus carries fibrations missing both inside.
pub fn ibundle_table() -> Vec<IBundleFacts> {
    let sd = |sym, fibers: Vec<(u32, i64)>, twisted| {
        SeifertData::new(sym, fibers, 0, twisted).expect("table data is valid")
    };
    vec![
        IBundleFacts {
            bundle: IBundle::TxI,
            orientable: true,
            boundary_tori: 2,
            boundary_kleins: 0,
            fibrations: vec![sd(BaseSymbol::A, vec![], false)],
            boundary_fibrations_extend: true,
        },
        IBundleFacts {
            bundle: IBundle::TxtI,
            orientable: false,
            boundary_tori: 1,
            boundary_kleins: 0,
            fibrations: vec![
                sd(BaseSymbol::S, vec![], false),
                sd(BaseSymbol::Abar, vec![], false),
            ],
            boundary_fibrations_extend: true,
        },
        IBundleFacts {
            bundle: IBundle::KxI,
            orientable: false,
            boundary_tori: 0,
            boundary_kleins: 2,
            fibrations: vec![
                sd(BaseSymbol::A, vec![], true),
                sd(BaseSymbol::Dddot, vec![], false),
            ],
            boundary_fibrations_extend: true,
        },
        IBundleFacts {
            bundle: IBundle::KxtI,
            orientable: true,
            boundary_tori: 1,
            boundary_kleins: 0,
            fibrations: vec![
                sd(BaseSymbol::S, vec![], true),
                sd(BaseSymbol::D, vec![(2, 1), (2, 1)], false),
            ],
            boundary_fibrations_extend: false,
        },
        IBundleFacts {
            bundle: IBundle::KxttI,
            orientable: false,
            boundary_tori: 0,
            boundary_kleins: 1,
            fibrations: vec![
                sd(BaseSymbol::Abar, vec![], true),
                sd(BaseSymbol::Ddot, vec![(2, 1)], false),
            ],
            boundary_fibrations_extend: true,
        },
    ]
}

/// Which fibration of the twisted interval bundle over the torus receives a
/// block: the one over the Moebius band or over the mirrored annulus.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TwistedSide {
    Moebius,
    MirroredAnnulus,
}

/// Glues a fibered block over the disc to the twisted interval bundle over
/// the torus, fiber to fiber along the single boundary torus. The base disc
/// closes against the Moebius band to a projective plane, or against the
/// mirrored annulus to a mirrored disc; either way the result is closed
/// with non-orientable total space, so its Euler number vanishes.
pub fn glue_block_to_ibundle(
    block: &SeifertData,
    bundle: IBundle,
    side: TwistedSide,
) -> Result<SeifertData, SeifertError> {
    if bundle != IBundle::TxtI {
        return Err(SeifertError::UnsupportedBundle);
    }
    if block.base.symbol != BaseSymbol::D {
        return Err(SeifertError::BlockBase {
            got: block.base.symbol,
        });
    }
    let symbol = match side {
        TwistedSide::Moebius => BaseSymbol::RP2,
        TwistedSide::MirroredAnnulus => BaseSymbol::Dbar,
    };
    SeifertData::new(symbol, block.fibers.clone(), 0, false)
}

/// The fibration of the orientation double cover of a closed fibered space
/// with non-orientable total space. The base unwraps to its own double
/// cover - the sphere over the projective plane and the mirrored disc, the
/// torus over the Klein bottle - and every exceptional fiber lifts to a
/// pair whose slopes differ by sign, so the covering Euler number vanishes
/// along with the quotient's and the characteristic doubles.
pub fn seifert_double_cover(sd: &SeifertData) -> Result<SeifertData, SeifertError> {
    if !sd.is_closed() {
        return Err(SeifertError::NotClosed);
    }
    if orientable_total_space(sd) {
        return Err(SeifertError::AlreadyOrientable);
    }
    let symbol = match sd.base.symbol {
        BaseSymbol::RP2 | BaseSymbol::Dbar => BaseSymbol::S2,
        BaseSymbol::K => BaseSymbol::T,
        _ => unreachable!("closed non-orientable data fibers over RP2, K or Dbar"),
    };
    let mut fibers = Vec::with_capacity(2 * sd.fibers.len());
    for &(p, q) in &sd.fibers {
        fibers.push((p, q));
        fibers.push((p, -q));
    }
    SeifertData::new(symbol, fibers, 0, false)
}

/// A decomposition of a closed manifold into fibered blocks glued along
/// tori and Klein bottles. Blocks are bounded with negative base
/// characteristic. A torus cut is two-sided and absorbs two block boundary
/// components; a Klein bottle cut is one-sided, its neighborhood is a
/// twisted interval bundle, and it absorbs one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionDescriptor {
    pub blocks: Vec<SeifertData>,
    pub cuts: Vec<ClosedSurface>,
}

impl DecompositionDescriptor {
    pub fn validate(&self) -> Result<(), SeifertError> {
        if self.blocks.is_empty() {
            return Err(SeifertError::BadBlock);
        }
        let zero = rat(0, 1);
        for b in &self.blocks {
            if b.is_closed() || chi_orb(b) >= zero {
                return Err(SeifertError::BadBlock);
            }
        }
        let ends: usize = self
            .blocks
            .iter()
            .map(|b| usize::from(b.base.symbol.boundary_circles()))
            .sum();
        let expected: usize = self
            .cuts
            .iter()
            .map(|c| match c {
                ClosedSurface::Torus => 2,
                ClosedSurface::Klein => 1,
            })
            .sum();
        if ends != expected {
            return Err(SeifertError::CutArity { ends, expected });
        }
        Ok(())
    }
}

/// The structure column of a census record: a closed fibered space, a torus
/// bundle monodromy, a block decomposition, or a bare hyperbolic marker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeometricStructure {
    Seifert(SeifertData),
    TorusBundle(Mat2),
    Decomposition(DecompositionDescriptor),
    Hyperbolic,
}

/// Checks a record's stated geometry against its structure data. A
/// decomposition states no single geometry; every other structure must
/// match the classification its data implies.
pub fn check_consistency(
    geometry: Option<Geometry>,
    structure: &GeometricStructure,
) -> Result<(), SeifertError> {
    match structure {
        GeometricStructure::Seifert(sd) => {
            let implied = classify_geometry(sd)?;
            if geometry != Some(implied) {
                return Err(SeifertError::Inconsistent);
            }
        }
        GeometricStructure::TorusBundle(m) => {
            if m.det().abs() != 1 {
                return Err(SeifertError::Inconsistent);
            }
            let implied = match bundle_geometry(m) {
                BundleGeometry::Flat => Geometry::E3,
                BundleGeometry::Nil => Geometry::Nil,
                BundleGeometry::Sol => Geometry::Sol,
            };
            if geometry != Some(implied) {
                return Err(SeifertError::Inconsistent);
            }
        }
        GeometricStructure::Decomposition(dd) => {
            dd.validate()?;
            if geometry.is_some() {
                return Err(SeifertError::Inconsistent);
            }
        }
        GeometricStructure::Hyperbolic => {
            if geometry != Some(Geometry::Hyp) {
                return Err(SeifertError::Inconsistent);
            }
        }
    }
    Ok(())
}

/// A non-orientable manifold proposed as the quotient of an orientable
/// record by a free orientation-reversing involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientCandidate {
    Seifert(SeifertData),
    SolBundle(Mat2),
    /// Flat records are matched against the fixed list of flat quotients
    /// elsewhere rather than reconstructed here.
    Flat,
}

/// What the quotient filter concluded for one orientable record: the
/// candidate quotients, or a one-line reason why there are none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterOutcome {
    pub candidates: Vec<QuotientCandidate>,
    pub reason: Option<String>,
}

fn no_candidates(reason: &str) -> FilterOutcome {
    FilterOutcome {
        candidates: Vec::new(),
        reason: Some(String::from(reason)),
    }
}

/// Decides which non-orientable manifolds can double-cover one orientable
/// census record. Hyperbolic records are ruled out because the isometry
/// groups of the smallest closed hyperbolic manifolds are known to contain
/// no orientation-reversing element. Torus bundle records descend only for
/// the Sol monodromies that are squares of a reversing class; flat records
/// defer to the fixed flat list. Fibered records need a vanishing Euler
/// number and, below characteristic zero, a quotient fibration over a base
/// whose orientation double cover is the record's base - those candidates
/// are reconstructed slope by slope and accepted when doubling gives the
/// record back.
pub fn filter_orientable_record(
    geometry: Option<Geometry>,
    structure: &GeometricStructure,
) -> Result<FilterOutcome, SeifertError> {
    check_consistency(geometry, structure)?;
    match structure {
        GeometricStructure::Hyperbolic => Ok(no_candidates(
            "the isometry groups of these hyperbolic manifolds are known to \
             contain no orientation-reversing element",
        )),
        GeometricStructure::TorusBundle(m) => {
            if m.det() != 1 {
                return Err(SeifertError::NotOrientable);
            }
            match bundle_geometry(m) {
                BundleGeometry::Flat => Ok(FilterOutcome {
                    candidates: vec![QuotientCandidate::Flat],
                    reason: None,
                }),
                BundleGeometry::Nil => Ok(no_candidates(
                    "every isometry of Nil preserves orientation, so Nil \
                     manifolds have no non-orientable quotients",
                )),
                BundleGeometry::Sol => sol_quotients(m),
            }
        }
        GeometricStructure::Seifert(sd) => {
            if !orientable_total_space(sd) {
                return Err(SeifertError::NotOrientable);
            }
            let zero = rat(0, 1);
            if euler_number(sd) != zero {
                return Ok(no_candidates(
                    "the Euler number is nonzero and would have to vanish on a \
                     record with a non-orientable quotient",
                ));
            }
            let chi = chi_orb(sd);
            if chi > zero {
                return Ok(no_candidates(
                    "quotients of sphere-base fibered spaces contain two-sided \
                     projective planes and fall outside this census",
                ));
            }
            if chi == zero {
                return Ok(FilterOutcome {
                    candidates: vec![QuotientCandidate::Flat],
                    reason: None,
                });
            }
            seifert_quotients(sd)
        }
        GeometricStructure::Decomposition(dd) => {
            if dd.blocks.iter().any(|b| !orientable_total_space(b)) {
                return Err(SeifertError::NotOrientable);
            }
            let kleins = dd
                .cuts
                .iter()
                .filter(|c| **c == ClosedSurface::Klein)
                .count();
            if kleins % 2 == 1 {
                return Ok(no_candidates(
                    "a quotient would lift to a decomposition with an even \
                     number of Klein bottle cuts",
                ));
            }
            let zero = rat(0, 1);
            if dd.blocks.iter().any(|b| euler_number(b) != zero) {
                return Ok(no_candidates(
                    "a block carries nonzero Euler number, which obstructs any \
                     fiber-respecting free involution",
                ));
            }
            Ok(no_candidates(
                "all blocks carry vanishing Euler numbers; matching the \
                 gluings is outside the scope of this filter",
            ))
        }
    }
}

/// Sol bundle quotients: a non-orientable quotient of a torus bundle is a
/// torus bundle over a reversing monodromy whose square is the given class,
/// and such squares have trace t^2 + 2.
fn sol_quotients(m: &Mat2) -> Result<FilterOutcome, SeifertError> {
    let tr = m.trace();
    let mut root = None;
    let mut t = 1i64;
    loop {
        let sq = t * t + 2;
        if sq == tr {
            root = Some(t);
            break;
        }
        if sq > tr {
            break;
        }
        t += 1;
    }
    let t = match root {
        Some(t) => t,
        None => {
            return Ok(no_candidates(
                "the trace is not of the form t^2 + 2, so the bundle is not \
                 the square of a reversing monodromy",
            ))
        }
    };
    let a = Mat2::new(t, 1, 1, 0);
    let sq = tr_square_identity(&a);
    let equivalent =
        bundles_equivalent(&sq, m).map_err(|_| SeifertError::MonodromyBudget)?;
    if equivalent {
        Ok(FilterOutcome {
            candidates: vec![QuotientCandidate::SolBundle(a)],
            reason: None,
        })
    } else {
        Ok(no_candidates(
            "the trace matches a reversing square but the bundle classes \
             differ",
        ))
    }
}

/// Quotient candidates for a fibered record with vanishing Euler number and
/// negative characteristic: fibrations over the bases whose orientation
/// double cover is the record's base, with half the characteristic, slopes
/// reduced into [1, p/2] since they are only defined up to sign.
fn seifert_quotients(record: &SeifertData) -> Result<FilterOutcome, SeifertError> {
    let bases: &[BaseSymbol] = match record.base.symbol {
        BaseSymbol::S2 => &[BaseSymbol::RP2, BaseSymbol::Dbar],
        BaseSymbol::T => &[BaseSymbol::K],
        _ => {
            return Ok(no_candidates(
                "no quotient fibration has its orientation double cover over \
                 this base",
            ))
        }
    };
    let target = chi_orb(record) / 2;
    let mut candidates = Vec::new();
    let mut seen: BTreeSet<SeifertData> = BTreeSet::new();
    for &symbol in bases {
        let deficit = symbol.bare_chi() - target;
        for cone in cone_multisets_with_total(deficit) {
            for slopes in coprime_slope_choices(&cone) {
                let fibers: Vec<(u32, i64)> =
                    cone.iter().copied().zip(slopes.iter().copied()).collect();
                let cand = SeifertData::new(symbol, fibers, 0, false)?;
                if !seen.insert(quotient_normal_form(&cand)?) {
                    continue;
                }
                if same_fibered_space(&seifert_double_cover(&cand)?, record)? {
                    candidates.push(QuotientCandidate::Seifert(cand));
                }
            }
        }
    }
    if candidates.is_empty() {
        Ok(no_candidates("no quotient fibration doubles to this record"))
    } else {
        Ok(FilterOutcome {
            candidates,
            reason: None,
        })
    }
}

/// All sorted cone multisets whose contributions 1 - 1/p sum exactly to the
/// given total. Each term lies in [1/2, 1), so the count is pinned to
/// (total, 2 total] and every order to a rational interval.
fn cone_multisets_with_total(total: Ratio<i64>) -> Vec<Vec<u32>> {
    let zero = rat(0, 1);
    let mut out = Vec::new();
    if total == zero {
        out.push(Vec::new());
        return out;
    }
    if total < zero {
        return out;
    }
    let kmax = floor_ratio(rat(2, 1) * total);
    for k in 1..=kmax {
        let mut prefix = Vec::new();
        exact_cone_descend(total, k as usize, 2, &mut prefix, &mut out);
    }
    out
}

fn exact_cone_descend(
    rem: Ratio<i64>,
    slots: usize,
    min_p: u32,
    prefix: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    let zero = rat(0, 1);
    let one = rat(1, 1);
    if slots == 1 {
        // exactness: 1 - 1/p = rem
        if rem <= zero || rem >= one {
            return;
        }
        let p = (one - rem).recip();
        if !p.is_integer() {
            return;
        }
        let p = p.to_integer();
        if p >= i64::from(min_p) {
            prefix.push(p as u32);
            out.push(prefix.clone());
            prefix.pop();
        }
        return;
    }
    // nondecreasing orders: the current term is the smallest, so
    // slots * (1 - 1/p) <= rem; the rest stay below one each, so
    // 1/p < slots - rem
    let s = Ratio::from_integer(slots as i64);
    let frac = one - rem / s;
    if frac <= zero {
        return;
    }
    let hi = floor_ratio(frac.recip());
    let gap = s - rem;
    if gap <= zero {
        return;
    }
    let lo = if gap >= one {
        i64::from(min_p)
    } else {
        core::cmp::max(i64::from(min_p), floor_ratio(gap.recip()) + 1)
    };
    let mut p = lo;
    while p <= hi {
        prefix.push(p as u32);
        exact_cone_descend(rem - (one - rat(1, p)), slots - 1, p as u32, prefix, out);
        prefix.pop();
        p += 1;
    }
}

/// Slope choices per cone order, one representative of each +-q class:
/// q in [1, p/2] coprime to p, all combinations.
fn coprime_slope_choices(cone: &[u32]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for &p in cone {
        let pp = i64::from(p);
        let mut next = Vec::new();
        for q in 1..=pp / 2 {
            if pp.gcd(&q) != 1 {
                continue;
            }
            for prev in &out {
                let mut v = prev.clone();
                v.push(q);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sd(symbol: BaseSymbol, fibers: &[(u32, i64)], b: i64, twisted: bool) -> SeifertData {
        SeifertData::new(symbol, fibers.to_vec(), b, twisted).unwrap()
    }

    #[test]
    fn chi_orb_matches_hand_computations() {
        assert_eq!(chi_orb(&sd(BaseSymbol::S2, &[], 0, false)), rat(2, 1));
        assert_eq!(
            chi_orb(&sd(BaseSymbol::RP2, &[(2, 1), (3, 1)], 0, false)),
            rat(-1, 6)
        );
        assert_eq!(
            chi_orb(&sd(BaseSymbol::Dbar, &[(2, 1), (3, 1)], 0, false)),
            rat(-1, 6)
        );
        assert_eq!(chi_orb(&sd(BaseSymbol::K, &[(2, 1)], 0, false)), rat(-1, 2));
        assert_eq!(chi_orb(&sd(BaseSymbol::Ddot, &[(2, 1)], 0, false)), rat(0, 1));
        assert_eq!(
            chi_orb(&sd(BaseSymbol::S2, &[(2, 1), (3, 1), (2, 1), (3, 1)], 0, false)),
            rat(-1, 3)
        );
        assert_eq!(BaseSymbol::Dddot.bare_chi(), rat(0, 1));
        assert_eq!(BaseSymbol::Abar.bare_chi(), rat(0, 1));
        assert_eq!(BaseSymbol::Ddot.bare_chi(), rat(1, 2));
    }

    #[test]
    fn euler_number_sums_slopes_and_twist() {
        assert_eq!(
            euler_number(&sd(BaseSymbol::S2, &[(2, 1), (3, 1)], -1, false)),
            rat(-1, 6)
        );
        // non-orientable total space: identically zero
        assert_eq!(
            euler_number(&sd(BaseSymbol::RP2, &[(2, 1), (3, 1)], 0, false)),
            rat(0, 1)
        );
        // orientable fiber-reversing class over RP2 sums honestly
        assert_eq!(
            euler_number(&sd(BaseSymbol::RP2, &[(3, 1), (3, -1)], 0, true)),
            rat(0, 1)
        );
        assert_eq!(
            euler_number(&sd(BaseSymbol::RP2, &[(2, 1), (2, 1)], -1, true)),
            rat(0, 1)
        );
        assert_eq!(
            SeifertData::new(BaseSymbol::D, vec![(2, 1)], 1, false),
            Err(SeifertError::StrayTwist)
        );
        assert_eq!(
            SeifertData::new(BaseSymbol::S2, vec![(4, 2)], 0, false),
            Err(SeifertError::BadFiber { p: 4, q: 2 })
        );
        assert_eq!(
            SeifertData::new(BaseSymbol::T, vec![], 0, true),
            Err(SeifertError::NoTwistedClass {
                base: BaseSymbol::T
            })
        );
    }

    #[test]
    fn geometry_table_covers_all_six_cells() {
        assert_eq!(
            classify_geometry(&sd(BaseSymbol::S2, &[], 1, false)),
            Ok(Geometry::S3)
        );
        assert_eq!(
            classify_geometry(&sd(BaseSymbol::S2, &[], 0, false)),
            Ok(Geometry::S2xR)
        );
        assert_eq!(
            classify_geometry(&sd(BaseSymbol::T, &[], 1, false)),
            Ok(Geometry::Nil)
        );
        assert_eq!(
            classify_geometry(&sd(BaseSymbol::T, &[], 0, false)),
            Ok(Geometry::E3)
        );
        assert_eq!(
            classify_geometry(&sd(BaseSymbol::S2, &[(2, 1), (3, 1), (7, 1)], -1, false)),
            Ok(Geometry::SL2R)
        );
        assert_eq!(
            classify_geometry(&sd(
                BaseSymbol::S2,
                &[(2, 1), (3, 1), (2, -1), (3, -1)],
                0,
                false
            )),
            Ok(Geometry::H2xR)
        );
        // the flat space with finite homology: RP2 base, two cones, twisted
        assert_eq!(
            classify_geometry(&sd(BaseSymbol::RP2, &[(2, 1), (2, 1)], -1, true)),
            Ok(Geometry::E3)
        );
        assert_eq!(
            classify_geometry(&sd(BaseSymbol::D, &[(2, 1)], 0, false)),
            Err(SeifertError::NotClosed)
        );
    }

    #[test]
    fn slope_normalization_preserves_the_classification() {
        let x = sd(BaseSymbol::S2, &[(2, 1), (3, 1), (2, -1), (3, -1)], 0, false);
        let nx = normal_form(&x).unwrap();
        assert_eq!(
            nx,
            sd(BaseSymbol::S2, &[(2, 1), (2, 1), (3, 1), (3, 2)], -2, false)
        );
        assert!(same_fibered_space(&x, &nx).unwrap());
        assert_eq!(
            classify_geometry(&x).unwrap(),
            classify_geometry(&nx).unwrap()
        );
        // fiber reversal identifies mirror presentations
        let y = sd(BaseSymbol::S2, &[(2, 1), (3, 2)], 0, false);
        let yr = sd(BaseSymbol::S2, &[(2, 1), (3, 1)], -2, false);
        assert!(same_fibered_space(&y, &yr).unwrap());
        assert!(!same_fibered_space(
            &sd(BaseSymbol::S2, &[(2, 1), (3, 1)], 0, false),
            &sd(BaseSymbol::S2, &[(2, 1), (3, 1)], -1, false)
        )
        .unwrap());
        // quotient slopes match up to sign
        assert!(same_fibered_space(
            &sd(BaseSymbol::RP2, &[(3, 2)], 0, false),
            &sd(BaseSymbol::RP2, &[(3, 1)], 0, false)
        )
        .unwrap());
        assert!(same_fibered_space(
            &sd(BaseSymbol::K, &[(5, 2)], 0, false),
            &sd(BaseSymbol::K, &[(5, 3)], 0, false)
        )
        .unwrap());
        assert!(!same_fibered_space(
            &sd(BaseSymbol::RP2, &[(3, 1)], 0, false),
            &sd(BaseSymbol::Dbar, &[(3, 1)], 0, false)
        )
        .unwrap());
        // orientable and non-orientable total spaces never coincide
        assert!(!same_fibered_space(
            &sd(BaseSymbol::RP2, &[(2, 1), (2, 1)], -1, true),
            &sd(BaseSymbol::RP2, &[(2, 1), (2, 1)], 0, false)
        )
        .unwrap());
    }

    #[test]
    fn threshold_enumeration_matches_the_known_small_families() {
        let fam = |base, cone: &[u32], lo, hi: Option<u32>| OrbifoldFamily {
            base,
            cone: cone.to_vec(),
            last_min: lo,
            last_max: hi,
        };
        let got = enumerate_small_orbifolds(rat(-1, 6)).unwrap();
        let want = vec![
            fam(BaseSymbol::S2, &[2, 2, 2], 3, Some(3)),
            fam(BaseSymbol::S2, &[2, 3], 7, None),
            fam(BaseSymbol::S2, &[2, 4], 5, Some(12)),
            fam(BaseSymbol::S2, &[2, 5], 5, Some(7)),
            fam(BaseSymbol::S2, &[2, 6], 6, Some(6)),
            fam(BaseSymbol::S2, &[3, 3], 4, Some(6)),
            fam(BaseSymbol::S2, &[3, 4], 4, Some(4)),
            fam(BaseSymbol::RP2, &[2], 3, Some(3)),
            fam(BaseSymbol::Dbar, &[2], 3, Some(3)),
        ];
        assert_eq!(got, want);
        assert_eq!(
            enumerate_small_orbifolds(rat(-1, 2)),
            Err(SeifertError::BadThreshold)
        );
        assert_eq!(
            enumerate_small_orbifolds(rat(0, 1)),
            Err(SeifertError::BadThreshold)
        );
        assert_eq!(
            enumerate_small_orbifolds(rat(1, 6)),
            Err(SeifertError::BadThreshold)
        );
        let wider = enumerate_small_orbifolds(rat(-1, 3)).unwrap();
        assert!(wider.contains(&fam(BaseSymbol::S2, &[2, 7], 7, Some(42))));
        assert!(wider.contains(&fam(BaseSymbol::S2, &[2, 2, 3], 3, Some(3))));
        assert!(wider.contains(&fam(BaseSymbol::RP2, &[3], 3, Some(3))));
    }

    #[test]
    fn threshold_enumeration_agrees_with_brute_force() {
        fn brute(
            symbol: BaseSymbol,
            t: Ratio<i64>,
            prefix: &mut Vec<u32>,
            out: &mut Vec<Vec<u32>>,
        ) {
            if prefix.len() == 5 {
                return;
            }
            let from = prefix.last().copied().unwrap_or(2);
            for p in from..=64 {
                prefix.push(p);
                let chi = BaseOrbifold::new(symbol, prefix.clone()).unwrap().chi();
                if chi < t {
                    prefix.pop();
                    break;
                }
                if chi < rat(0, 1) {
                    out.push(prefix.clone());
                }
                brute(symbol, t, prefix, out);
                prefix.pop();
            }
        }
        for t in [rat(-1, 6), rat(-1, 3), rat(-2, 5)] {
            let families = enumerate_small_orbifolds(t).unwrap();
            for (symbol, _) in [(BaseSymbol::S2, 2), (BaseSymbol::RP2, 1), (BaseSymbol::Dbar, 1)] {
                let mut found = Vec::new();
                brute(symbol, t, &mut Vec::new(), &mut found);
                // every brute orbifold sits in exactly one family
                for cone in &found {
                    let (prefix, last) = cone.split_at(cone.len() - 1);
                    let hits = families
                        .iter()
                        .filter(|f| {
                            f.base == symbol
                                && f.cone == prefix
                                && f.last_min <= last[0]
                                && f.last_max.map_or(true, |hi| last[0] <= hi)
                        })
                        .count();
                    assert_eq!(hits, 1, "{symbol} {cone:?} at {t}");
                }
                // and every family instance up to the cap is found by brute force
                for f in families.iter().filter(|f| f.base == symbol) {
                    let hi = f.last_max.unwrap_or(64).min(64);
                    for last in f.last_min..=hi {
                        let mut cone = f.cone.clone();
                        cone.push(last);
                        let chi = BaseOrbifold::new(symbol, cone.clone()).unwrap().chi();
                        assert!(t <= chi && chi < rat(0, 1));
                        assert!(found.contains(&cone), "{symbol} {cone:?} at {t}");
                    }
                }
            }
        }
    }

    #[test]
    fn euler_zero_search_finds_witnesses_and_obstructions() {
        assert_eq!(
            e_zero_realizable(&[2, 3, 7]),
            Ok(EulerZero::Divisibility { index: 0 })
        );
        assert_eq!(
            e_zero_realizable(&[3, 3, 4]),
            Ok(EulerZero::Divisibility { index: 2 })
        );
        assert_eq!(e_zero_realizable(&[2, 4, 8]), Ok(EulerZero::NoSolution));
        assert_eq!(e_zero_realizable(&[2, 6, 6]), Ok(EulerZero::NoSolution));
        assert_eq!(
            e_zero_realizable(&[2, 2]),
            Ok(EulerZero::Realizable { q: vec![-1, 1] })
        );
        assert_eq!(
            e_zero_realizable(&[]),
            Ok(EulerZero::Realizable { q: vec![] })
        );
        assert_eq!(
            e_zero_realizable(&[1, 2]),
            Err(SeifertError::BadCone { p: 1 })
        );
        for ps in [&[2u32, 2, 3, 3][..], &[2, 7, 14], &[2, 12, 12]] {
            match e_zero_realizable(ps).unwrap() {
                EulerZero::Realizable { q } => {
                    let mut sum = rat(0, 1);
                    for (&p, &qi) in ps.iter().zip(&q) {
                        assert_eq!(i64::from(p).gcd(&qi), 1);
                        sum += rat(qi, i64::from(p));
                    }
                    assert_eq!(sum, rat(0, 1), "{ps:?}");
                }
                other => panic!("expected witness for {ps:?}, got {other:?}"),
            }
        }
        // brute-force consistency on all small multisets
        fn multisets(limit: u32, len: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if prefix.len() == len {
                out.push(prefix.clone());
                return;
            }
            for p in prefix.last().copied().unwrap_or(2)..=limit {
                prefix.push(p);
                multisets(limit, len, prefix, out);
                prefix.pop();
            }
        }
        let mut all = Vec::new();
        for len in 1..=3 {
            multisets(9, len, &mut Vec::new(), &mut all);
        }
        for ps in all {
            let fast = matches!(
                e_zero_realizable(&ps).unwrap(),
                EulerZero::Realizable { .. }
            );
            let mut slow = false;
            let mut q = vec![0i64; ps.len()];
            fn search(ps: &[u32], q: &mut Vec<i64>, i: usize, found: &mut bool) {
                if *found {
                    return;
                }
                if i == ps.len() {
                    let mut sum = rat(0, 1);
                    for (&p, &qi) in ps.iter().zip(q.iter()) {
                        sum += rat(qi, i64::from(p));
                    }
                    *found = sum == rat(0, 1);
                    return;
                }
                let p = i64::from(ps[i]);
                for cand in -3 * p..=3 * p {
                    if p.gcd(&cand) == 1 {
                        q[i] = cand;
                        search(ps, q, i + 1, found);
                    }
                }
            }
            search(&ps, &mut q, 0, &mut slow);
            assert_eq!(fast, slow, "{ps:?}");
        }
    }

    #[test]
    fn e_zero_instances_bound_the_open_tail() {
        // in the narrow window nothing over the sphere reaches e = 0,
        // including the unbounded family, whose tail is cut by divisibility
        for f in enumerate_small_orbifolds(rat(-1, 6)).unwrap() {
            if f.base == BaseSymbol::S2 {
                assert_eq!(e_zero_instances(&f).unwrap(), vec![]);
            }
        }
        // widening the window turns up honest instances
        let wider = enumerate_small_orbifolds(rat(-1, 3)).unwrap();
        let by_cone = |cone: &[u32]| {
            wider
                .iter()
                .find(|f| f.base == BaseSymbol::S2 && f.cone == cone)
                .unwrap()
                .clone()
        };
        let hits = e_zero_instances(&by_cone(&[2, 2, 3])).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].0, 3);
        let hits = e_zero_instances(&by_cone(&[2, 7])).unwrap();
        assert_eq!(hits.iter().map(|(p, _)| *p).collect::<Vec<_>>(), vec![14]);
        // unbounded at -1/3 as well: only the divisor 9 survives the tail
        // bound and it fails the congruence
        let f33 = by_cone(&[3, 3]);
        assert_eq!(f33.last_max, None);
        assert_eq!(e_zero_instances(&f33).unwrap(), vec![]);
        assert_eq!(e_zero_realizable(&[3, 3, 9]), Ok(EulerZero::NoSolution));
    }

    #[test]
    fn mapping_class_orbits_on_flat_cohomology() {
        assert_eq!(
            ibundle_orbits(ClosedSurface::Torus),
            vec![vec![(0, 0)], vec![(0, 1), (1, 0), (1, 1)]]
        );
        assert_eq!(
            ibundle_orbits(ClosedSurface::Klein),
            vec![vec![(0, 0)], vec![(0, 1)], vec![(1, 0), (1, 1)]]
        );
    }

    #[test]
    fn ibundle_table_matches_the_orbit_count_and_boundaries() {
        let table = ibundle_table();
        assert_eq!(table.len(), 5);
        let over_torus = [IBundle::TxI, IBundle::TxtI];
        let over_klein = [IBundle::KxI, IBundle::KxtI, IBundle::KxttI];
        assert_eq!(
            ibundle_orbits(ClosedSurface::Torus).len(),
            over_torus.len()
        );
        assert_eq!(
            ibundle_orbits(ClosedSurface::Klein).len(),
            over_klein.len()
        );
        for facts in &table {
            for f in &facts.fibrations {
                assert_eq!(orientable_total_space(f), facts.orientable, "{}", facts.bundle);
                assert_eq!(chi_orb(f), rat(0, 1), "{}", facts.bundle);
                assert!(!f.is_closed(), "{}", facts.bundle);
                assert_eq!(
                    f.base.symbol.boundary_circles(),
                    facts.boundary_tori + facts.boundary_kleins,
                    "{}",
                    facts.bundle
                );
            }
            assert_eq!(
                facts.boundary_fibrations_extend,
                facts.bundle != IBundle::KxtI
            );
        }
    }

    #[test]
    fn gluing_a_disc_block_to_the_twisted_interval_bundle() {
        let block = sd(BaseSymbol::D, &[(2, 1), (3, 1)], 0, false);
        let closed_rp2 =
            glue_block_to_ibundle(&block, IBundle::TxtI, TwistedSide::Moebius).unwrap();
        assert_eq!(closed_rp2, sd(BaseSymbol::RP2, &[(2, 1), (3, 1)], 0, false));
        assert_eq!(classify_geometry(&closed_rp2), Ok(Geometry::H2xR));
        let closed_dbar =
            glue_block_to_ibundle(&block, IBundle::TxtI, TwistedSide::MirroredAnnulus).unwrap();
        assert_eq!(closed_dbar, sd(BaseSymbol::Dbar, &[(2, 1), (3, 1)], 0, false));
        assert_eq!(chi_orb(&closed_dbar), rat(-1, 6));
        assert_eq!(
            glue_block_to_ibundle(&block, IBundle::KxI, TwistedSide::Moebius),
            Err(SeifertError::UnsupportedBundle)
        );
        assert_eq!(
            glue_block_to_ibundle(
                &sd(BaseSymbol::A, &[(2, 1)], 0, false),
                IBundle::TxtI,
                TwistedSide::Moebius
            ),
            Err(SeifertError::BlockBase {
                got: BaseSymbol::A
            })
        );
    }

    #[test]
    fn double_cover_doubles_the_characteristic_and_kills_e() {
        let quotients = [
            sd(BaseSymbol::RP2, &[(2, 1), (3, 1)], 0, false),
            sd(BaseSymbol::Dbar, &[(2, 1), (3, 1)], 0, false),
            sd(BaseSymbol::K, &[(3, 2)], 0, false),
            sd(BaseSymbol::K, &[], 0, false),
        ];
        for q in &quotients {
            let cover = seifert_double_cover(q).unwrap();
            assert!(orientable_total_space(&cover));
            assert_eq!(chi_orb(&cover), chi_orb(q) * 2);
            assert_eq!(euler_number(&cover), rat(0, 1));
        }
        let reference = sd(
            BaseSymbol::S2,
            &[(2, 1), (3, 1), (2, -1), (3, -1)],
            0,
            false,
        );
        for q in &quotients[..2] {
            let cover = seifert_double_cover(q).unwrap();
            assert!(same_fibered_space(&cover, &reference).unwrap());
        }
        assert_eq!(
            seifert_double_cover(&sd(BaseSymbol::S2, &[], 0, false)),
            Err(SeifertError::AlreadyOrientable)
        );
        assert_eq!(
            seifert_double_cover(&sd(BaseSymbol::RP2, &[(3, 1), (3, -1)], 0, true)),
            Err(SeifertError::AlreadyOrientable)
        );
        assert_eq!(
            seifert_double_cover(&sd(BaseSymbol::D, &[(2, 1)], 0, false)),
            Err(SeifertError::NotClosed)
        );
    }

    #[test]
    fn orientable_records_filter_to_the_known_quotients() {
        let h2xr_cover = sd(
            BaseSymbol::S2,
            &[(2, 1), (3, 1), (2, -1), (3, -1)],
            0,
            false,
        );
        let out = filter_orientable_record(
            Some(Geometry::H2xR),
            &GeometricStructure::Seifert(h2xr_cover),
        )
        .unwrap();
        assert_eq!(
            out.candidates,
            vec![
                QuotientCandidate::Seifert(sd(BaseSymbol::RP2, &[(2, 1), (3, 1)], 0, false)),
                QuotientCandidate::Seifert(sd(BaseSymbol::Dbar, &[(2, 1), (3, 1)], 0, false)),
            ]
        );
        assert_eq!(out.reason, None);
        // a shifted presentation of the same record gives the same quotients
        let shifted = sd(BaseSymbol::S2, &[(2, 1), (2, 1), (3, 1), (3, 2)], -2, false);
        let out2 = filter_orientable_record(
            Some(Geometry::H2xR),
            &GeometricStructure::Seifert(shifted),
        )
        .unwrap();
        assert_eq!(out.candidates, out2.candidates);
        // the other H2xR record at this characteristic has no quotient:
        // doubles only cover sphere and torus bases
        let rp2_record = sd(BaseSymbol::RP2, &[(3, 1), (3, -1)], 0, true);
        let out = filter_orientable_record(
            Some(Geometry::H2xR),
            &GeometricStructure::Seifert(rp2_record),
        )
        .unwrap();
        assert!(out.candidates.is_empty());
        assert!(out.reason.is_some());
        // torus-base records look for Klein bottle bases
        let t_record = sd(BaseSymbol::T, &[(3, 1), (3, -1)], 0, false);
        let out = filter_orientable_record(
            Some(Geometry::H2xR),
            &GeometricStructure::Seifert(t_record),
        )
        .unwrap();
        assert_eq!(
            out.candidates,
            vec![QuotientCandidate::Seifert(sd(
                BaseSymbol::K,
                &[(3, 1)],
                0,
                false
            ))]
        );
        // Euler obstruction
        let sl2 = sd(BaseSymbol::S2, &[(2, 1), (3, 1), (7, 1)], -1, false);
        let out = filter_orientable_record(
            Some(Geometry::SL2R),
            &GeometricStructure::Seifert(sl2),
        )
        .unwrap();
        assert!(out.candidates.is_empty());
        // sphere base, characteristic zero and flat markers
        let out = filter_orientable_record(
            Some(Geometry::S2xR),
            &GeometricStructure::Seifert(sd(BaseSymbol::S2, &[], 0, false)),
        )
        .unwrap();
        assert!(out.candidates.is_empty());
        let out = filter_orientable_record(
            Some(Geometry::E3),
            &GeometricStructure::Seifert(sd(BaseSymbol::RP2, &[(2, 1), (2, 1)], -1, true)),
        )
        .unwrap();
        assert_eq!(out.candidates, vec![QuotientCandidate::Flat]);
        // bundles: flat, Nil, Sol square classes
        let out = filter_orientable_record(
            Some(Geometry::E3),
            &GeometricStructure::TorusBundle(Mat2::new(0, -1, 1, 0)),
        )
        .unwrap();
        assert_eq!(out.candidates, vec![QuotientCandidate::Flat]);
        let out = filter_orientable_record(
            Some(Geometry::Nil),
            &GeometricStructure::TorusBundle(Mat2::new(1, 1, 0, 1)),
        )
        .unwrap();
        assert!(out.candidates.is_empty());
        let out = filter_orientable_record(
            Some(Geometry::Sol),
            &GeometricStructure::TorusBundle(Mat2::new(2, 1, 1, 1)),
        )
        .unwrap();
        assert_eq!(
            out.candidates,
            vec![QuotientCandidate::SolBundle(Mat2::new(1, 1, 1, 0))]
        );
        let out = filter_orientable_record(
            Some(Geometry::Sol),
            &GeometricStructure::TorusBundle(Mat2::new(5, 2, 2, 1)),
        )
        .unwrap();
        assert_eq!(
            out.candidates,
            vec![QuotientCandidate::SolBundle(Mat2::new(2, 1, 1, 0))]
        );
        // same trace, different class: no quotient
        let out = filter_orientable_record(
            Some(Geometry::Sol),
            &GeometricStructure::TorusBundle(Mat2::new(5, 1, 4, 1)),
        )
        .unwrap();
        assert!(out.candidates.is_empty());
        assert!(out.reason.unwrap().contains("classes differ"));
        // trace off the t^2 + 2 grid
        let out = filter_orientable_record(
            Some(Geometry::Sol),
            &GeometricStructure::TorusBundle(Mat2::new(3, 1, 2, 1)),
        )
        .unwrap();
        assert!(out.candidates.is_empty());
        // hyperbolic marker
        let out =
            filter_orientable_record(Some(Geometry::Hyp), &GeometricStructure::Hyperbolic)
                .unwrap();
        assert!(out.candidates.is_empty());
        assert!(out.reason.unwrap().contains("orientation-reversing"));
        // decompositions: Klein cut parity, Euler obstruction, honest note
        let block_e0 = sd(BaseSymbol::D, &[(2, 1), (3, 1), (6, -5)], 0, false);
        assert_eq!(euler_number(&block_e0), rat(0, 1));
        assert!(chi_orb(&block_e0) < rat(0, 1));
        let parity = DecompositionDescriptor {
            blocks: vec![block_e0.clone()],
            cuts: vec![ClosedSurface::Klein],
        };
        let out =
            filter_orientable_record(None, &GeometricStructure::Decomposition(parity)).unwrap();
        assert!(out.reason.unwrap().contains("even"));
        let block_e = sd(BaseSymbol::D, &[(2, 1), (3, 1)], 0, false);
        let euler = DecompositionDescriptor {
            blocks: vec![block_e.clone(), block_e],
            cuts: vec![ClosedSurface::Torus],
        };
        let out =
            filter_orientable_record(None, &GeometricStructure::Decomposition(euler)).unwrap();
        assert!(out.reason.unwrap().contains("nonzero Euler"));
        let undecided = DecompositionDescriptor {
            blocks: vec![block_e0.clone(), block_e0],
            cuts: vec![ClosedSurface::Torus],
        };
        let out = filter_orientable_record(None, &GeometricStructure::Decomposition(undecided))
            .unwrap();
        assert!(out.candidates.is_empty());
        assert!(out.reason.unwrap().contains("outside the scope"));
        // consistency gate
        assert_eq!(
            filter_orientable_record(
                Some(Geometry::Sol),
                &GeometricStructure::TorusBundle(Mat2::new(0, -1, 1, 0))
            ),
            Err(SeifertError::Inconsistent)
        );
        assert_eq!(
            filter_orientable_record(
                Some(Geometry::E3),
                &GeometricStructure::Seifert(sd(BaseSymbol::S2, &[], 0, false))
            ),
            Err(SeifertError::Inconsistent)
        );
        // a reversing monodromy is itself non-orientable input
        assert_eq!(
            filter_orientable_record(
                Some(Geometry::Sol),
                &GeometricStructure::TorusBundle(Mat2::new(1, 1, 1, 0))
            ),
            Err(SeifertError::NotOrientable)
        );
    }

    #[test]
    fn decomposition_validation_checks_blocks_and_cut_arity() {
        let good = sd(BaseSymbol::D, &[(2, 1), (3, 1)], 0, false);
        assert!(DecompositionDescriptor {
            blocks: vec![good.clone(), good.clone()],
            cuts: vec![ClosedSurface::Torus],
        }
        .validate()
        .is_ok());
        assert_eq!(
            DecompositionDescriptor {
                blocks: vec![],
                cuts: vec![ClosedSurface::Torus],
            }
            .validate(),
            Err(SeifertError::BadBlock)
        );
        assert_eq!(
            DecompositionDescriptor {
                blocks: vec![sd(BaseSymbol::D, &[(2, 1)], 0, false)],
                cuts: vec![ClosedSurface::Klein],
            }
            .validate(),
            Err(SeifertError::BadBlock)
        );
        assert_eq!(
            DecompositionDescriptor {
                blocks: vec![good.clone()],
                cuts: vec![ClosedSurface::Torus],
            }
            .validate(),
            Err(SeifertError::CutArity {
                ends: 1,
                expected: 2
            })
        );
        assert!(DecompositionDescriptor {
            blocks: vec![good],
            cuts: vec![ClosedSurface::Klein],
        }
        .validate()
        .is_ok());
    }

    #[test]
    fn seifert_text_form_roundtrips() {
        let forms = [
            "S2; (2,1)(3,1)(2,-1)(3,-1); 0",
            "RP2; (3,1)(3,-1); 0~",
            "RP2; (2,1)(2,1); -1~",
            "K; -; 0",
            "D; (2,1); 0",
            "T; -; 1",
        ];
        for form in forms {
            let parsed: SeifertData = form.parse().unwrap();
            assert_eq!(parsed.to_string(), form);
            let reparsed: SeifertData = parsed.to_string().parse().unwrap();
            assert_eq!(parsed, reparsed);
        }
        assert!("X; -; 0".parse::<SeifertData>().is_err());
        assert!("S2; (2,2); 0".parse::<SeifertData>().is_err());
        assert!("S2; -; 1~".parse::<SeifertData>().is_err());
        assert!("D; (2,1); 3".parse::<SeifertData>().is_err());
        assert!("S2; -".parse::<SeifertData>().is_err());
    }
}
