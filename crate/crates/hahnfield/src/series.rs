//! Hahn series with exponents in a Hahn group and rational coefficients.
//!
//! A series is a finite sum of monomials `c * t^g`; the monomial with the
//! smallest exponent dominates, so the valuation of a nonzero series is its
//! least exponent and the total order compares the leading coefficient of
//! the difference.  Everything is exact: coefficients are big rationals and
//! no floating point enters anywhere.
//!
//! Inverses generally have infinite support, so [`invert_truncated`]
//! produces the inverse only below a requested exponent bound and proves
//! its own answer: the product of the input with the computed inverse must
//! differ from `1` only at or beyond the promised precision.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::chain::Chain;
use crate::group::GroupElement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("the zero series has no inverse")]
    ZeroInverse,
    #[error("the truncation bound must exceed the negated valuation of the series")]
    BoundBelowLeading,
    #[error("no finite truncation reaches the requested bound")]
    TruncationUnreachable,
}

/// A finitely supported series `sum of c * t^g` over a Hahn group.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Series {
    terms: BTreeMap<GroupElement, BigRational>,
}

impl Series {
    pub fn zero() -> Self {
        Series {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Series::monomial(BigRational::one(), GroupElement::zero())
    }

    pub fn monomial(coeff: BigRational, exponent: GroupElement) -> Self {
        let mut s = Series::zero();
        s.add_term(exponent, coeff);
        s
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (GroupElement, BigRational)>,
    {
        let mut s = Series::zero();
        for (g, c) in terms {
            s.add_term(g, c);
        }
        s
    }

    pub fn add_term(&mut self, exponent: GroupElement, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exponent) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
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

    /// Terms in ascending exponent order, dominant monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponent: &GroupElement) -> BigRational {
        self.terms.get(exponent).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The dominant monomial: least exponent with its coefficient.
    pub fn leading(&self) -> Option<(&GroupElement, &BigRational)> {
        self.terms.iter().next()
    }

    /// The valuation of a nonzero series.
    pub fn valuation(&self) -> &GroupElement {
        assert!(!self.is_zero(), "the zero series has no valuation");
        self.terms.keys().next().unwrap()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Series::zero();
        }
        Series {
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c * k)).collect(),
        }
    }

    pub fn sign(&self) -> Ordering {
        match self.leading() {
            None => Ordering::Equal,
            Some((_, c)) => {
                if c.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn display(&self, chain: &Chain) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(g, c)| format!("{}*t{{{}}}", c, g.display(chain)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl Add for &Series {
    type Output = Series;

    fn add(self, rhs: &Series) -> Series {
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Series {
    type Output = Series;

    fn sub(self, rhs: &Series) -> Series {
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(g.clone(), -c);
        }
        out
    }
}

impl Neg for &Series {
    type Output = Series;

    fn neg(self) -> Series {
        Series {
            terms: self.terms.iter().map(|(g, c)| (g.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Series {
    type Output = Series;

    fn mul(self, rhs: &Series) -> Series {
        let mut out = Series::zero();
        for (ga, ca) in &self.terms {
            for (gb, cb) in &rhs.terms {
                out.add_term(ga + gb, ca * cb);
            }
        }
        out
    }
}

impl Add for Series {
    type Output = Series;

    fn add(self, rhs: Series) -> Series {
        &self + &rhs
    }
}

impl Sub for Series {
    type Output = Series;

    fn sub(self, rhs: Series) -> Series {
        &self - &rhs
    }
}

impl Neg for Series {
    type Output = Series;

    fn neg(self) -> Series {
        -&self
    }
}

impl Mul for Series {
    type Output = Series;

    fn mul(self, rhs: Series) -> Series {
        &self * &rhs
    }
}

impl PartialOrd for Series {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Series {
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

fn coeff_sign(c: &BigRational) -> Ordering {
    if c.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// A series known only below an exponent bound: the represented object is
/// `terms + O(t^bound)` and every stored exponent is strictly below the
/// bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    terms: Series,
    bound: GroupElement,
}

impl TruncatedSeries {
    pub fn new(terms: Series, bound: GroupElement) -> Self {
        assert!(
            terms.terms().all(|(g, _)| *g < bound),
            "every retained exponent must lie below the bound"
        );
        TruncatedSeries { terms, bound }
    }

    pub fn terms(&self) -> &Series {
        &self.terms
    }

    pub fn bound(&self) -> &GroupElement {
        &self.bound
    }

    pub fn display(&self, chain: &Chain) -> String {
        if self.terms.is_zero() {
            format!("O(t{{{}}})", self.bound.display(chain))
        } else {
            format!(
                "{} + O(t{{{}}})",
                self.terms.display(chain),
                self.bound.display(chain)
            )
        }
    }
}

/// Drops every term whose exponent is at or beyond the bound.
pub fn truncate(series: &Series, bound: &GroupElement) -> TruncatedSeries {
    let kept = Series {
        terms: series
            .terms
            .iter()
            .filter(|(g, _)| *g < bound)
            .map(|(g, c)| (g.clone(), c.clone()))
            .collect(),
    };
    TruncatedSeries::new(kept, bound.clone())
}

fn drop_at(series: &Series, bound: &GroupElement) -> Series {
    Series {
        terms: series
            .terms
            .iter()
            .filter(|(g, _)| *g < bound)
            .map(|(g, c)| (g.clone(), c.clone()))
            .collect(),
    }
}

/// Inverts a nonzero series below the exponent bound.
///
/// Writing `a = c * t^g * (1 + eps)` with `eps` of positive valuation, the
/// inverse is `c^-1 * t^-g * sum (-eps)^i`, and a power of `eps` can only
/// contribute below the bound while `i * v(eps)` stays below
/// `capacity = bound + g`.  The number of powers needed is computed by an
/// exact rational ceiling on leading coefficients and then adjusted by
/// direct comparison in the group, which handles ties exactly.  When the
/// archimedean class of `v(eps)` lies strictly below that of the capacity,
/// no finite number of powers reaches the bound and the truncation is
/// refused.
///
/// Before returning, the product of the input with the answer is computed
/// exactly and must equal `1` up to terms at or beyond `bound + g`.
pub fn invert_truncated(a: &Series, bound: &GroupElement) -> Result<TruncatedSeries, SeriesError> {
    let Some((g, c)) = a.leading() else {
        return Err(SeriesError::ZeroInverse);
    };
    let (g, c) = (g.clone(), c.clone());
    let neg_g = -&g;
    if *bound <= neg_g {
        return Err(SeriesError::BoundBelowLeading);
    }
    let capacity = bound + &g;

    let mut eps = Series::zero();
    for (h, d) in a.terms().skip(1) {
        eps.add_term(h - &g, d / &c);
    }

    let powers = if eps.is_zero() {
        0usize
    } else {
        let step = eps.valuation().clone();
        let step_class = step.v_nat();
        let capacity_class = capacity.v_nat();
        if step_class > capacity_class {
            return Err(SeriesError::TruncationUnreachable);
        }
        let step_point = step.leading().unwrap().0.clone();
        let ratio = capacity.coeff(&step_point) / step.leading().unwrap().1;
        let mut n = ratio.ceil().to_integer().max(BigInt::one());
        if n > BigInt::one() && step.scale(&BigRational::from(&n - BigInt::one())) >= capacity {
            n -= BigInt::one();
        }
        let mut adjustments = 0;
        while step.scale(&BigRational::from(n.clone())) < capacity {
            n += BigInt::one();
            adjustments += 1;
            assert!(adjustments <= 2, "the ceiling estimate is off by at most one");
        }
        let n: usize = n.try_into().expect("truncation depth fits in usize");
        n - 1
    };

    let neg_eps = -&eps;
    let mut partial = Series::one();
    let mut power = Series::one();
    for _ in 0..powers {
        power = drop_at(&(&power * &neg_eps), &capacity);
        partial = &partial + &power;
    }

    let inverse_lead = Series::monomial(c.recip(), neg_g);
    let result = drop_at(&(&inverse_lead * &partial), bound);

    let residual = &(a * &result) - &Series::one();
    assert!(
        residual.is_zero() || *residual.valuation() >= capacity,
        "the computed inverse must be correct below the bound"
    );
    Ok(TruncatedSeries::new(result, bound.clone()))
}
