//! Deterministic sampling of chain data for randomised checks.
//!
//! Every randomised verification in the crate draws from a [`Sampler`], a
//! ChaCha-seeded source, so each check is reproducible from the seed it
//! reports.

use num::{BigInt, BigRational, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{Chain, ChainPoint, Window};
use crate::group::GroupElement;
use crate::series::Series;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x4841_484e;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn index(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        self.rng.gen_range(0..bound)
    }

    pub fn integer(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn flip(&mut self) -> bool {
        self.rng.gen()
    }

    /// A nonzero rational with small numerator and denominator.
    pub fn rational_nonzero(&mut self) -> BigRational {
        let numer = loop {
            let n = self.integer(-6, 6);
            if n != 0 {
                break n;
            }
        };
        BigRational::new(BigInt::from(numer), BigInt::from(self.integer(1, 4)))
    }

    pub fn point(&mut self, chain: &Chain, window: Window) -> ChainPoint {
        match chain {
            Chain::Finite { labels } => ChainPoint::Finite(self.index(labels.len())),
            Chain::ProductQZ { labels } => ChainPoint::Product {
                q: self.index(labels.len()),
                n: BigInt::from(self.integer(window.lo(), window.hi())),
            },
        }
    }

    /// A group element with at most `max_terms` support points inside the
    /// window; may be zero.
    pub fn group_element(
        &mut self,
        chain: &Chain,
        window: Window,
        max_terms: usize,
    ) -> GroupElement {
        let count = self.index(max_terms + 1);
        let mut g = GroupElement::zero();
        for _ in 0..count {
            g = g + GroupElement::term(self.point(chain, window), self.rational_nonzero());
        }
        g
    }

    pub fn nonzero_group_element(
        &mut self,
        chain: &Chain,
        window: Window,
        max_terms: usize,
    ) -> GroupElement {
        assert!(max_terms > 0);
        loop {
            let g = self.group_element(chain, window, max_terms);
            if !g.is_zero() {
                return g;
            }
        }
    }

    /// A rational in `[-1, 1]`.
    pub fn unit_scale(&mut self) -> BigRational {
        let denom = self.integer(1, 4);
        BigRational::new(
            BigInt::from(self.integer(-denom, denom)),
            BigInt::from(denom),
        )
    }

    /// A series with at most `1 + extra` terms whose valuation is exactly
    /// `anchor` with the given leading coefficient; the remaining exponents
    /// sit strictly above the anchor.
    pub fn series_with_leading(
        &mut self,
        chain: &Chain,
        window: Window,
        extra: usize,
        anchor: GroupElement,
        lead: BigRational,
    ) -> Series {
        assert!(!lead.is_zero());
        let mut s = Series::monomial(lead, anchor.clone());
        for _ in 0..self.index(extra + 1) {
            let bump = self.nonzero_group_element(chain, window, 2).abs();
            s.add_term(&anchor + &bump, self.rational_nonzero());
        }
        s
    }

    /// An arbitrary series, possibly zero, possibly with valuation zero.
    pub fn series(&mut self, chain: &Chain, window: Window, max_terms: usize) -> Series {
        let count = self.index(max_terms + 1);
        let mut s = Series::zero();
        for _ in 0..count {
            s.add_term(
                self.group_element(chain, window, 2),
                self.rational_nonzero(),
            );
        }
        s
    }

    /// A nonzero series whose valuation is nonzero.
    pub fn nonzero_valuation_series(
        &mut self,
        chain: &Chain,
        window: Window,
        extra: usize,
    ) -> Series {
        let anchor = self.nonzero_group_element(chain, window, 2);
        let lead = self.rational_nonzero();
        self.series_with_leading(chain, window, extra, anchor, lead)
    }

    /// A series with strictly positive valuation.
    pub fn infinitesimal_series(
        &mut self,
        chain: &Chain,
        window: Window,
        extra: usize,
    ) -> Series {
        let anchor = self.nonzero_group_element(chain, window, 2).abs();
        let lead = self.rational_nonzero();
        self.series_with_leading(chain, window, extra, anchor, lead)
    }

    /// A nonzero series with valuation at least zero.
    pub fn bounded_series(&mut self, chain: &Chain, window: Window, extra: usize) -> Series {
        let anchor = if self.flip() {
            GroupElement::zero()
        } else {
            self.nonzero_group_element(chain, window, 2).abs()
        };
        let lead = self.rational_nonzero();
        self.series_with_leading(chain, window, extra, anchor, lead)
    }
}
