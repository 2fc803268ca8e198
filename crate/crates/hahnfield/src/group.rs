//! The Hahn group over a chain: finitely supported maps from chain points
//! to rationals, written additively.
//!
//! An element is kept as a sorted term map with no zero coefficients.  The
//! order compares leading coefficients: `g > 0` exactly when the coefficient
//! at the *smallest* support point is positive, so units at smaller chain
//! points dominate those at larger ones.  The natural valuation [`v_nat`]
//! returns that smallest support point (`Infinity` for `0`); its fibers are
//! the archimedean classes of the group.
//!
//! [`v_nat`]: GroupElement::v_nat

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num::{BigRational, Signed, Zero};

use crate::chain::{Chain, ChainPoint, ExtendedPoint, FinalSegment};

/// A finitely supported element of the Hahn group over a chain.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupElement {
    terms: BTreeMap<ChainPoint, BigRational>,
}

fn coeff_sign(c: &BigRational) -> Ordering {
    if c.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

impl Ord for GroupElement {
    /// Sign of the leading coefficient of `self - other`, found by merging
    /// the two term maps without materialising the difference.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut lhs = self.terms.iter();
        let mut rhs = other.terms.iter();
        let mut a = lhs.next();
        let mut b = rhs.next();
        loop {
            match (a, b) {
                (None, None) => return Ordering::Equal,
                (Some((_, ca)), None) => return coeff_sign(ca),
                (None, Some((_, cb))) => return coeff_sign(cb).reverse(),
                (Some((ga, ca)), Some((gb, cb))) => match ga.cmp(gb) {
                    Ordering::Less => return coeff_sign(ca),
                    Ordering::Greater => return coeff_sign(cb).reverse(),
                    Ordering::Equal => {
                        if ca != cb {
                            return ca.cmp(cb);
                        }
                        a = lhs.next();
                        b = rhs.next();
                    }
                },
            }
        }
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl GroupElement {
    pub fn zero() -> Self {
        GroupElement::default()
    }

    /// The unit `e_p` with coefficient `1` at `p`.
    pub fn unit(p: ChainPoint) -> Self {
        GroupElement::term(p, BigRational::from_integer(1.into()))
    }

    /// The single-term element `coeff * e_p`; zero coefficients collapse to `0`.
    pub fn term(p: ChainPoint, coeff: BigRational) -> Self {
        let mut g = GroupElement::zero();
        g.add_term(p, coeff);
        g
    }

    /// Sums the given terms, accumulating repeated points.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (ChainPoint, BigRational)>,
    {
        let mut g = GroupElement::zero();
        for (p, c) in terms {
            g.add_term(p, c);
        }
        g
    }

    fn add_term(&mut self, p: ChainPoint, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ChainPoint, &BigRational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ChainPoint> {
        self.terms.keys()
    }

    /// The coefficient at `p`, zero when `p` is not in the support.
    pub fn coeff(&self, p: &ChainPoint) -> BigRational {
        self.terms.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The natural valuation: the smallest support point, `Infinity` for `0`.
    pub fn v_nat(&self) -> ExtendedPoint {
        match self.terms.keys().next() {
            Some(p) => ExtendedPoint::Point(p.clone()),
            None => ExtendedPoint::Infinity,
        }
    }

    /// The term at the smallest support point.
    pub fn leading(&self) -> Option<(&ChainPoint, &BigRational)> {
        self.terms.iter().next()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return GroupElement::zero();
        }
        GroupElement {
            terms: self.terms.iter().map(|(p, c)| (p.clone(), c * k)).collect(),
        }
    }

    /// Comparison against zero.
    pub fn sign(&self) -> Ordering {
        match self.leading() {
            Some((_, c)) => coeff_sign(c),
            None => Ordering::Equal,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Whether every support point lies on `chain`.
    pub fn supported_on(&self, chain: &Chain) -> bool {
        self.support().all(|p| chain.contains(p))
    }

    pub fn display(&self, chain: &Chain) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(p, c)| format!("{}@{}", c, chain.display_point(p)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl Add for &GroupElement {
    type Output = GroupElement;

    fn add(self, rhs: Self) -> GroupElement {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }
}

impl Sub for &GroupElement {
    type Output = GroupElement;

    fn sub(self, rhs: Self) -> GroupElement {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(p.clone(), -c);
        }
        out
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;

    fn neg(self) -> GroupElement {
        GroupElement {
            terms: self.terms.iter().map(|(p, c)| (p.clone(), -c)).collect(),
        }
    }
}

impl Add for GroupElement {
    type Output = GroupElement;

    fn add(self, rhs: Self) -> GroupElement {
        &self + &rhs
    }
}

impl Sub for GroupElement {
    type Output = GroupElement;

    fn sub(self, rhs: Self) -> GroupElement {
        &self - &rhs
    }
}

impl Neg for GroupElement {
    type Output = GroupElement;

    fn neg(self) -> GroupElement {
        -&self
    }
}

/// Whether `a` and `b` are archimedean-equivalent: same natural valuation.
pub fn arch_equiv(a: &GroupElement, b: &GroupElement) -> bool {
    a.v_nat() == b.v_nat()
}

/// Whether `g` lies in the convex subgroup indexed by `segment`, i.e. all
/// of its support does.  For nonzero `g` this is equivalent to `v_nat(g)`
/// lying in the segment, because final segments are upward closed.
pub fn subgroup_contains(chain: &Chain, segment: &FinalSegment, g: &GroupElement) -> bool {
    g.terms().all(|(p, _)| segment.contains(chain, p))
}
