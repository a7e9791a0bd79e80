//! Exact arithmetic for m-primary monomial ideals.
//!
//! Two ring families are supported: power series rings `k[[x_1..x_d]]`
//! (`d >= 2`) whose monomial ideals are antichains in `N^d`, and numerical
//! semigroup rings `k[[t^S]]` (`d = 1`) whose monomial ideals are sets of
//! valuations. In both cases an ideal is a finite set of exponents closed
//! upward under the ambient monoid, and every length reduces to counting
//! monoid elements outside that set.

mod monomial;
mod semigroup;

use std::fmt;
use std::sync::Arc;

pub use monomial::MonomialRing;
pub use semigroup::NumericalSemigroup;

use crate::error::{Error, Result};

/// Default cap on the number of lattice points a colength count may visit.
pub const DEFAULT_VOLUME_CAP: u64 = 100_000_000;

pub type Exponent = Vec<u32>;

#[derive(Clone, Debug)]
pub enum RingKind {
    PowerSeries(MonomialRing),
    Semigroup(NumericalSemigroup),
}

/// A local ring carrying monomial ideals.
#[derive(Clone, Debug)]
pub struct Ring {
    kind: RingKind,
    volume_cap: u64,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (RingKind::PowerSeries(a), RingKind::PowerSeries(b)) => a == b,
            (RingKind::Semigroup(a), RingKind::Semigroup(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn power_series<S: AsRef<str>>(variables: &[S]) -> Result<Arc<Ring>> {
        Ok(Arc::new(Ring {
            kind: RingKind::PowerSeries(MonomialRing::new(variables)?),
            volume_cap: DEFAULT_VOLUME_CAP,
        }))
    }

    pub fn standard_power_series(dim: usize) -> Result<Arc<Ring>> {
        Ok(Arc::new(Ring {
            kind: RingKind::PowerSeries(MonomialRing::standard(dim)?),
            volume_cap: DEFAULT_VOLUME_CAP,
        }))
    }

    pub fn semigroup(generators: &[u32]) -> Result<Arc<Ring>> {
        Ok(Arc::new(Ring {
            kind: RingKind::Semigroup(NumericalSemigroup::new(generators, DEFAULT_VOLUME_CAP)?),
            volume_cap: DEFAULT_VOLUME_CAP,
        }))
    }

    pub fn with_volume_cap(&self, cap: u64) -> Arc<Ring> {
        Arc::new(Ring {
            kind: self.kind.clone(),
            volume_cap: cap,
        })
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn volume_cap(&self) -> u64 {
        self.volume_cap
    }

    /// Krull dimension.
    pub fn dim(&self) -> usize {
        match &self.kind {
            RingKind::PowerSeries(r) => r.dim(),
            RingKind::Semigroup(_) => 1,
        }
    }

    /// Length of exponent vectors.
    fn arity(&self) -> usize {
        self.dim()
    }

    pub fn as_semigroup(&self) -> Option<&NumericalSemigroup> {
        match &self.kind {
            RingKind::Semigroup(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_power_series(&self) -> Option<&MonomialRing> {
        match &self.kind {
            RingKind::PowerSeries(r) => Some(r),
            _ => None,
        }
    }

    /// True iff `b` lies in the principal ideal generated by `a`.
    #[inline]
    pub fn divides(&self, a: &[u32], b: &[u32]) -> bool {
        match &self.kind {
            RingKind::PowerSeries(_) => monomial::divides(a, b),
            RingKind::Semigroup(s) => b[0] >= a[0] && s.contains(b[0] - a[0]),
        }
    }

    fn minimalize(&self, gens: Vec<Exponent>) -> Vec<Exponent> {
        match &self.kind {
            RingKind::PowerSeries(_) => monomial::minimalize(gens),
            RingKind::Semigroup(s) => {
                let vals = semigroup::minimalize(s, gens.into_iter().map(|g| g[0]).collect());
                vals.into_iter().map(|v| vec![v]).collect()
            }
        }
    }

    fn maximal_exponents(&self) -> Vec<Exponent> {
        match &self.kind {
            RingKind::PowerSeries(r) => (0..r.dim())
                .map(|k| {
                    let mut e = vec![0; r.dim()];
                    e[k] = 1;
                    e
                })
                .collect(),
            RingKind::Semigroup(s) => s.generators().iter().map(|&g| vec![g]).collect(),
        }
    }

    pub fn format_monomial(&self, e: &[u32]) -> String {
        match &self.kind {
            RingKind::PowerSeries(r) => r.format_monomial(e),
            RingKind::Semigroup(_) => match e[0] {
                0 => "1".into(),
                1 => "t".into(),
                p => format!("t^{p}"),
            },
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RingKind::PowerSeries(r) => r.fmt(f),
            RingKind::Semigroup(s) => s.fmt(f),
        }
    }
}

/// A monomial ideal, stored as its unique minimal generating set.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Arc<Ring>,
    gens: Vec<Exponent>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring && self.gens == other.gens
    }
}

impl Eq for Ideal {}

impl std::hash::Hash for Ideal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.gens.hash(state);
    }
}

impl Ideal {
    /// Builds a proper nonzero ideal from arbitrary generators, reducing them to the
    /// minimal generating set.
    pub fn new(ring: &Arc<Ring>, gens: Vec<Exponent>) -> Result<Ideal> {
        if gens.is_empty() {
            return Err(Error::InvalidIdeal("empty generator set".into()));
        }
        let arity = ring.arity();
        for g in &gens {
            if g.len() != arity {
                return Err(Error::InvalidIdeal(format!(
                    "exponent vector {g:?} has length {}, ring has {arity} variables",
                    g.len()
                )));
            }
            if g.iter().all(|&e| e == 0) {
                return Err(Error::InvalidIdeal("the unit ideal is not allowed here".into()));
            }
            if let Some(s) = ring.as_semigroup() {
                if !s.contains(g[0]) {
                    return Err(Error::NotInSemigroup(g[0]));
                }
            }
        }
        Ok(Ideal {
            gens: ring.minimalize(gens),
            ring: ring.clone(),
        })
    }

    /// Convenience constructor for semigroup ideals from valuations.
    pub fn from_valuations(ring: &Arc<Ring>, vals: &[u32]) -> Result<Ideal> {
        if ring.as_semigroup().is_none() {
            return Err(Error::RingMismatch);
        }
        Ideal::new(ring, vals.iter().map(|&v| vec![v]).collect())
    }

    pub fn unit(ring: &Arc<Ring>) -> Ideal {
        Ideal {
            ring: ring.clone(),
            gens: vec![vec![0; ring.arity()]],
        }
    }

    /// The maximal ideal, generated by the variables (resp. the semigroup generators).
    pub fn maximal(ring: &Arc<Ring>) -> Ideal {
        Ideal {
            gens: ring.minimalize(ring.maximal_exponents()),
            ring: ring.clone(),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Minimal generators, in lexicographic (resp. increasing valuation) order.
    pub fn generators(&self) -> &[Exponent] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].iter().all(|&e| e == 0)
    }

    pub fn is_m_primary(&self) -> bool {
        match self.ring.kind() {
            RingKind::PowerSeries(r) => monomial::pure_powers(&self.gens, r.dim()).is_some(),
            RingKind::Semigroup(_) => true,
        }
    }

    fn same_ring(&self, other: &Ideal) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        let mut sums = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                let s = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| x.checked_add(*y))
                    .collect::<Option<Vec<u32>>>()
                    .ok_or_else(|| Error::ResourceLimit("exponent overflow".into()))?;
                sums.push(s);
            }
        }
        Ok(Ideal {
            gens: self.ring.minimalize(sums),
            ring: self.ring.clone(),
        })
    }

    /// `A^n` by repeated multiplication; `A^0` is the unit ideal.
    pub fn power(&self, n: usize) -> Result<Ideal> {
        let mut acc = Ideal::unit(&self.ring);
        for _ in 0..n {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        let gens = self.gens.iter().chain(&other.gens).cloned().collect();
        Ok(Ideal {
            gens: self.ring.minimalize(gens),
            ring: self.ring.clone(),
        })
    }

    /// True iff the monomial with exponent `e` lies in the ideal.
    pub fn contains_monomial(&self, e: &[u32]) -> bool {
        self.gens.iter().any(|g| self.ring.divides(g, e))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Ideal) -> Result<bool> {
        self.same_ring(other)?;
        Ok(other.gens.iter().all(|b| self.contains_monomial(b)))
    }

    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        self.same_ring(other)?;
        Ok(self.gens == other.gens)
    }

    /// `ℓ(R/A)`.
    pub fn colength(&self) -> Result<u64> {
        if self.is_unit() {
            return Ok(0);
        }
        let cap = self.ring.volume_cap();
        match self.ring.kind() {
            RingKind::PowerSeries(r) => {
                let bounds = monomial::pure_powers(&self.gens, r.dim())
                    .ok_or_else(|| Error::InfiniteColength(self.to_string()))?;
                let volume = bounds
                    .iter()
                    .try_fold(1u128, |acc, &b| acc.checked_mul(b as u128));
                match volume {
                    Some(v) if v <= cap as u128 => Ok(monomial::staircase_count(&self.gens)),
                    _ => Err(Error::ResourceLimit(format!(
                        "bounding box {bounds:?} exceeds {cap} points"
                    ))),
                }
            }
            RingKind::Semigroup(s) => {
                let bound = self.semigroup_bound(s);
                if bound as u64 > cap {
                    return Err(Error::ResourceLimit(format!(
                        "enumeration bound {bound} exceeds {cap}"
                    )));
                }
                Ok(self.colength_below(bound))
            }
        }
    }

    fn semigroup_bound(&self, s: &NumericalSemigroup) -> u32 {
        let max = self.gens.iter().map(|g| g[0]).max().unwrap_or(0);
        s.frobenius_bound() + max
    }

    /// Semigroup colength counted below an explicit bound.
    pub fn colength_below(&self, bound: u32) -> u64 {
        let s = self.ring.as_semigroup().expect("semigroup ring");
        let vals: Vec<u32> = self.gens.iter().map(|g| g[0]).collect();
        semigroup::colength_below(s, &vals, bound)
    }

    /// `μ(A)`, the number of minimal generators.
    pub fn min_gens(&self) -> Result<usize> {
        if self.is_unit() {
            return Err(Error::InvalidIdeal("μ of the unit ideal is not defined here".into()));
        }
        match self.ring.kind() {
            RingKind::PowerSeries(_) => Ok(self.gens.len()),
            RingKind::Semigroup(_) => {
                let m_a = Ideal::maximal(&self.ring).product(self)?;
                Ok(self.gens.iter().filter(|g| !m_a.contains_monomial(g)).count())
            }
        }
    }

    /// Multiplicity from the Newton polygon: twice the area under its lower hull (`d = 2`).
    pub fn newton_multiplicity(&self) -> Result<u64> {
        match self.ring.kind() {
            RingKind::PowerSeries(r) if r.dim() == 2 => {
                if !self.is_m_primary() {
                    return Err(Error::InfiniteColength(self.to_string()));
                }
                Ok(monomial::newton_covolume_doubled(&self.gens))
            }
            _ => Err(Error::Unsupported(
                "Newton multiplicity is only available in two variables".into(),
            )),
        }
    }

    /// Smallest valuation; equals `e_0` for an ideal of a numerical semigroup ring.
    pub fn order(&self) -> Option<u32> {
        self.ring.as_semigroup().map(|_| self.gens[0][0])
    }

    pub fn summary(&self) -> String {
        self.to_string()
    }
}

/// `ℓ(mI/mJ) = ℓ(R/mJ) - ℓ(R/mI)` for `J ⊆ I`.
pub fn goto_defect(i: &Ideal, j: &Ideal) -> Result<u64> {
    if !i.contains(j)? {
        return Err(Error::NotContained {
            inner: j.to_string(),
            outer: i.to_string(),
        });
    }
    let m = Ideal::maximal(i.ring());
    let mi = m.product(i)?.colength()?;
    let mj = m.product(j)?.colength()?;
    Ok(mj - mi)
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut gens: Vec<&Exponent> = self.gens.iter().collect();
        if self.ring.as_power_series().is_some() {
            gens.reverse();
        }
        write!(f, "(")?;
        for (i, g) in gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.ring.format_monomial(g))?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Arc<Ring> {
        Ring::power_series(&["x", "y"]).unwrap()
    }

    fn ideal(r: &Arc<Ring>, gens: &[&[u32]]) -> Ideal {
        Ideal::new(r, gens.iter().map(|g| g.to_vec()).collect()).unwrap()
    }

    fn worked() -> (Arc<Ring>, Ideal) {
        let r = Ring::semigroup(&[7, 15, 17, 33]).unwrap();
        let i = Ideal::from_valuations(&r, &[7, 17, 33]).unwrap();
        (r, i)
    }

    #[test]
    fn minimalize_on_construction() {
        let r = xy();
        let a = ideal(&r, &[&[2, 0], &[2, 1], &[0, 2]]);
        assert_eq!(a.generators(), &[vec![0, 2], vec![2, 0]]);
        assert_eq!(a.to_string(), "(x^2, y^2)");
        let b = ideal(&r, &[&[1, 0], &[0, 1]]);
        assert_eq!(b.generators().len(), 2);
        assert!(matches!(Ideal::new(&r, vec![]), Err(Error::InvalidIdeal(_))));
        assert!(matches!(Ideal::new(&r, vec![vec![0, 0]]), Err(Error::InvalidIdeal(_))));
        assert!(matches!(Ideal::new(&r, vec![vec![1, 0, 0]]), Err(Error::InvalidIdeal(_))));
    }

    #[test]
    fn products_and_powers() {
        let r = xy();
        let m = Ideal::maximal(&r);
        assert_eq!(m.product(&m).unwrap(), ideal(&r, &[&[2, 0], &[1, 1], &[0, 2]]));
        let a = ideal(&r, &[&[2, 0], &[0, 2]]);
        let b = ideal(&r, &[&[2, 0], &[1, 1], &[0, 2]]);
        assert_eq!(a.product(&b).unwrap(), m.power(4).unwrap());
        assert_eq!(b.power(2).unwrap(), m.power(4).unwrap());
        assert_eq!(m.power(3).unwrap().to_string(), "(x^3, x^2*y, x*y^2, y^3)");
        assert!(b.power(0).unwrap().is_unit());

        let (_, i) = worked();
        let j = Ideal::from_valuations(i.ring(), &[7]).unwrap();
        assert_eq!(j.product(&i).unwrap().to_string(), "(t^14, t^24, t^40)");
    }

    #[test]
    fn colengths() {
        let r = xy();
        assert_eq!(ideal(&r, &[&[2, 0], &[1, 1], &[0, 2]]).colength().unwrap(), 3);
        assert_eq!(Ideal::maximal(&r).colength().unwrap(), 1);
        let (_, i) = worked();
        assert_eq!(i.colength().unwrap(), 3);
        let open = ideal(&r, &[&[2, 0], &[1, 1]]);
        assert!(!open.is_m_primary());
        assert!(matches!(open.colength(), Err(Error::InfiniteColength(_))));
    }

    #[test]
    fn volume_cap_is_enforced() {
        let r = xy().with_volume_cap(100);
        let big = ideal(&r, &[&[20, 0], &[0, 20]]);
        assert!(matches!(big.colength(), Err(Error::ResourceLimit(_))));
        let small = ideal(&r, &[&[10, 0], &[0, 10]]);
        assert_eq!(small.colength().unwrap(), 100);
    }

    #[test]
    fn minimal_generators() {
        let r = xy();
        assert_eq!(ideal(&r, &[&[2, 0], &[1, 1], &[0, 2]]).min_gens().unwrap(), 3);
        let m = Ideal::maximal(&r);
        for n in 1..6 {
            assert_eq!(m.power(n).unwrap().min_gens().unwrap(), n + 1);
        }
        assert!(Ideal::unit(&r).min_gens().is_err());
        let (_, i) = worked();
        assert_eq!(i.min_gens().unwrap(), 3);
        assert_eq!(i.power(2).unwrap().min_gens().unwrap(), 4);
    }

    #[test]
    fn containment() {
        let r = xy();
        let m = Ideal::maximal(&r);
        let a = ideal(&r, &[&[2, 0], &[0, 2]]);
        let b = ideal(&r, &[&[2, 0], &[1, 1], &[0, 2]]);
        assert!(m.contains(&a).unwrap());
        assert!(!a.contains(&b).unwrap());
        assert!(a.product(&b).unwrap().equals(&b.power(2).unwrap()).unwrap());
        let other = Ring::power_series(&["u", "v"]).unwrap();
        assert_eq!(m.contains(&Ideal::maximal(&other)), Err(Error::RingMismatch));
        let same = Ring::power_series(&["x", "y"]).unwrap();
        assert!(m.equals(&Ideal::maximal(&same)).unwrap());
    }

    #[test]
    fn newton() {
        let r = xy();
        assert_eq!(Ideal::maximal(&r).newton_multiplicity().unwrap(), 1);
        assert_eq!(ideal(&r, &[&[2, 0], &[1, 1], &[0, 2]]).newton_multiplicity().unwrap(), 4);
        assert_eq!(ideal(&r, &[&[2, 0], &[0, 2]]).newton_multiplicity().unwrap(), 4);
        let r3 = Ring::standard_power_series(3).unwrap();
        assert!(matches!(
            Ideal::maximal(&r3).newton_multiplicity(),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn goto() {
        let r = xy();
        let i = ideal(&r, &[&[2, 0], &[1, 1], &[0, 2]]);
        let j = ideal(&r, &[&[2, 0], &[0, 2]]);
        assert_eq!(goto_defect(&i, &j).unwrap(), 0);
        assert_eq!(goto_defect(&i, &i).unwrap(), 0);
        assert!(matches!(goto_defect(&j, &i), Err(Error::NotContained { .. })));
        let m = Ideal::maximal(&r);
        // e_0 = μ + ℓ(R/I) - d + defect = 2 + 1 - 2 + 0
        assert_eq!(goto_defect(&m, &m).unwrap(), 0);
        let (_, i) = worked();
        let j = Ideal::from_valuations(i.ring(), &[7]).unwrap();
        // e_0 = 7 = 3 + 3 - 1 + 2
        assert_eq!(goto_defect(&i, &j).unwrap(), 2);
    }

    #[test]
    fn semigroup_colength_is_bound_independent() {
        let (_, i) = worked();
        for n in 1..5 {
            let p = i.power(n).unwrap();
            let s = p.ring().as_semigroup().unwrap();
            let base = s.frobenius_bound() + p.generators().last().unwrap()[0];
            assert_eq!(p.colength_below(base), p.colength_below(base + 97));
            assert_eq!(p.colength().unwrap(), p.colength_below(base + 1));
        }
    }

    #[test]
    fn semigroup_membership_is_checked() {
        let (r, _) = worked();
        assert_eq!(Ideal::from_valuations(&r, &[8]), Err(Error::NotInSemigroup(8)));
    }
}
