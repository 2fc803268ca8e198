//! Index chains for Hahn products and their right-shift structure.
//!
//! Two shapes of chain appear throughout the crate: finite chains given by
//! an ordered list of labels, and products `Q x Z` of a finite ordered label
//! set with the integers.  A product chain is ordered so that a *larger*
//! label names a *lower* block of the chain, and each block is a copy of
//! `Z`; so `(q2, 100) < (q1, 0)` whenever `q1` precedes `q2` in the label
//! list.  Both shapes carry a strictly increasing shift map `omega`: the
//! successor map on a finite chain (the top point shifts to `Infinity`) and
//! `(q, n) -> (q, n + 1)` on a product chain.
//!
//! Final segments of a chain index the convex subgroups of the Hahn group
//! built over it.  They are represented canonically and ordered by
//! inclusion, and [`qo_omega_leq`] decides the quasi-order the shift induces
//! on the chain.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num::BigInt;

/// A point of a [`Chain`].
///
/// Points order themselves: the chain order is encoded in the point data,
/// with the label comparison reversed for product points so that label
/// index `0` names the topmost block.  Points of different variants never
/// occur in one chain; their relative order is fixed but carries no meaning.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ChainPoint {
    /// The point of a finite chain with the given label index, counting
    /// from the bottom.
    Finite(usize),
    /// The point `(q, n)` of a product chain, where `q` is a label index.
    Product { q: usize, n: BigInt },
}

impl Ord for ChainPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ChainPoint::Finite(a), ChainPoint::Finite(b)) => a.cmp(b),
            (ChainPoint::Product { q: qa, n: na }, ChainPoint::Product { q: qb, n: nb }) => {
                qb.cmp(qa).then_with(|| na.cmp(nb))
            }
            (ChainPoint::Finite(_), ChainPoint::Product { .. }) => Ordering::Less,
            (ChainPoint::Product { .. }, ChainPoint::Finite(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for ChainPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A chain point extended by a formal top `Infinity`, the value of the
/// shift at the top of a finite chain and the natural valuation of `0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedPoint {
    Point(ChainPoint),
    Infinity,
}

impl ExtendedPoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ExtendedPoint::Infinity)
    }

    pub fn as_point(&self) -> Option<&ChainPoint> {
        match self {
            ExtendedPoint::Point(p) => Some(p),
            ExtendedPoint::Infinity => None,
        }
    }
}

impl From<ChainPoint> for ExtendedPoint {
    fn from(p: ChainPoint) -> Self {
        ExtendedPoint::Point(p)
    }
}

/// An index chain: either finite, or a product of finitely many copies of
/// `Z` stacked in *reverse* label order (see the module docs).
///
/// Labels are short identifiers (`[A-Za-z0-9_]+`), pairwise distinct; they
/// name finite-chain points directly and product-chain blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chain {
    Finite { labels: Vec<String> },
    ProductQZ { labels: Vec<String> },
}

fn validate_labels(labels: &[String]) {
    assert!(!labels.is_empty(), "a chain needs at least one label");
    let distinct: BTreeSet<&str> = labels.iter().map(String::as_str).collect();
    assert_eq!(distinct.len(), labels.len(), "chain labels must be distinct");
    for label in labels {
        assert!(
            !label.is_empty() && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'),
            "invalid chain label `{label}`",
        );
    }
}

impl Chain {
    pub fn finite<I>(labels: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        validate_labels(&labels);
        Chain::Finite { labels }
    }

    pub fn product<I>(labels: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        validate_labels(&labels);
        Chain::ProductQZ { labels }
    }

    pub fn labels(&self) -> &[String] {
        match self {
            Chain::Finite { labels } | Chain::ProductQZ { labels } => labels,
        }
    }

    pub fn label_count(&self) -> usize {
        self.labels().len()
    }

    pub fn is_product(&self) -> bool {
        matches!(self, Chain::ProductQZ { .. })
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels().iter().position(|l| l == label)
    }

    /// The product-chain point `(label, n)`.
    pub fn point(&self, label: &str, n: impl Into<BigInt>) -> ChainPoint {
        assert!(self.is_product(), "point(label, n) needs a product chain");
        let q = self
            .label_index(label)
            .unwrap_or_else(|| panic!("unknown label `{label}`"));
        ChainPoint::Product { q, n: n.into() }
    }

    /// The finite-chain point named by `label`.
    pub fn label_point(&self, label: &str) -> ChainPoint {
        assert!(!self.is_product(), "label_point needs a finite chain");
        let i = self
            .label_index(label)
            .unwrap_or_else(|| panic!("unknown label `{label}`"));
        ChainPoint::Finite(i)
    }

    pub fn contains(&self, p: &ChainPoint) -> bool {
        match (self, p) {
            (Chain::Finite { labels }, ChainPoint::Finite(i)) => *i < labels.len(),
            (Chain::ProductQZ { labels }, ChainPoint::Product { q, .. }) => *q < labels.len(),
            _ => false,
        }
    }

    fn assert_member(&self, p: &ChainPoint) {
        assert!(self.contains(p), "point {p:?} does not lie on this chain");
    }

    pub fn cmp_points(&self, a: &ChainPoint, b: &ChainPoint) -> Ordering {
        self.assert_member(a);
        self.assert_member(b);
        a.cmp(b)
    }

    /// The right shift: the successor on a finite chain, `(q, n + 1)` on a
    /// product chain.  Only the top of a finite chain shifts to `Infinity`.
    pub fn omega(&self, p: &ChainPoint) -> ExtendedPoint {
        self.assert_member(p);
        match p {
            ChainPoint::Finite(i) => {
                if i + 1 < self.label_count() {
                    ExtendedPoint::Point(ChainPoint::Finite(i + 1))
                } else {
                    ExtendedPoint::Infinity
                }
            }
            ChainPoint::Product { q, n } => ExtendedPoint::Point(ChainPoint::Product {
                q: *q,
                n: n + BigInt::from(1),
            }),
        }
    }

    /// The largest point, if there is one.
    pub fn top(&self) -> Option<ChainPoint> {
        match self {
            Chain::Finite { labels } => Some(ChainPoint::Finite(labels.len() - 1)),
            Chain::ProductQZ { .. } => None,
        }
    }

    /// All points whose integer coordinate lies in `window`, in ascending
    /// chain order.  Finite chains ignore the window.
    pub fn points(&self, window: Window) -> Vec<ChainPoint> {
        match self {
            Chain::Finite { labels } => (0..labels.len()).map(ChainPoint::Finite).collect(),
            Chain::ProductQZ { labels } => {
                let mut out = Vec::with_capacity(labels.len() * window.width());
                for q in (0..labels.len()).rev() {
                    for n in window.values() {
                        out.push(ChainPoint::Product {
                            q,
                            n: BigInt::from(n),
                        });
                    }
                }
                out
            }
        }
    }

    pub fn display_point(&self, p: &ChainPoint) -> String {
        self.assert_member(p);
        match p {
            ChainPoint::Finite(i) => self.labels()[*i].clone(),
            ChainPoint::Product { q, n } => format!("({},{})", self.labels()[*q], n),
        }
    }

    pub fn display_extended(&self, p: &ExtendedPoint) -> String {
        match p {
            ExtendedPoint::Point(p) => self.display_point(p),
            ExtendedPoint::Infinity => "Infinity".to_string(),
        }
    }
}

/// An inclusive range `[lo, hi]` of integer coordinates, bounding the
/// product-chain points that exhaustive checks enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    lo: i64,
    hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "window [{lo}, {hi}] is empty");
        Window { lo, hi }
    }

    pub fn lo(self) -> i64 {
        self.lo
    }

    pub fn hi(self) -> i64 {
        self.hi
    }

    /// Number of coordinate values in the window.
    pub fn width(self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn values(self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn contains(self, n: &BigInt) -> bool {
        *n >= BigInt::from(self.lo) && *n <= BigInt::from(self.hi)
    }

    /// The window widened by `by` on both sides.
    pub fn inflate(self, by: i64) -> Window {
        assert!(by >= 0);
        Window::new(self.lo - by, self.hi + by)
    }

    /// The smallest window containing `self` and the coordinate `n`.
    pub fn extend_to(self, n: i64) -> Window {
        Window::new(self.lo.min(n), self.hi.max(n))
    }
}

impl Default for Window {
    fn default() -> Self {
        Window::new(-8, 8)
    }
}

/// A final (upward closed) segment of a chain, in canonical form.
///
/// On a finite chain a final segment is a suffix of the label list.  On a
/// product chain it consists of the top `alls` blocks in full, optionally
/// extended by a tail `{ (q, n) : n >= t }` of the next block down.  `Ord`
/// is inclusion, which is total on the final segments of a fixed chain;
/// comparing segments of different chain shapes is meaningless.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FinalSegment {
    /// `{ points with index >= start }` of a finite chain; `start` equal to
    /// the chain length gives the empty segment.
    Suffix { start: usize },
    /// The top `alls` blocks of a product chain, plus the tail of block
    /// `alls` from coordinate `t` upward when `tail` is `Some(t)`.
    Slices { alls: usize, tail: Option<BigInt> },
}

impl Ord for FinalSegment {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (FinalSegment::Suffix { start: a }, FinalSegment::Suffix { start: b }) => b.cmp(a),
            (
                FinalSegment::Slices { alls: a, tail: ta },
                FinalSegment::Slices { alls: b, tail: tb },
            ) => a.cmp(b).then_with(|| match (ta, tb) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
                (Some(x), Some(y)) => y.cmp(x),
            }),
            (FinalSegment::Suffix { .. }, FinalSegment::Slices { .. }) => Ordering::Less,
            (FinalSegment::Slices { .. }, FinalSegment::Suffix { .. }) => Ordering::Greater,
        }
    }
}

impl PartialOrd for FinalSegment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FinalSegment {
    pub fn empty(chain: &Chain) -> Self {
        match chain {
            Chain::Finite { labels } => FinalSegment::Suffix {
                start: labels.len(),
            },
            Chain::ProductQZ { .. } => FinalSegment::Slices {
                alls: 0,
                tail: None,
            },
        }
    }

    pub fn full(chain: &Chain) -> Self {
        match chain {
            Chain::Finite { .. } => FinalSegment::Suffix { start: 0 },
            Chain::ProductQZ { labels } => FinalSegment::Slices {
                alls: labels.len(),
                tail: None,
            },
        }
    }

    pub fn is_empty(&self, chain: &Chain) -> bool {
        *self == FinalSegment::empty(chain)
    }

    pub fn is_full(&self, chain: &Chain) -> bool {
        *self == FinalSegment::full(chain)
    }

    pub fn is_valid_for(&self, chain: &Chain) -> bool {
        match (self, chain) {
            (FinalSegment::Suffix { start }, Chain::Finite { labels }) => *start <= labels.len(),
            (FinalSegment::Slices { alls, tail }, Chain::ProductQZ { labels }) => {
                *alls < labels.len() || (*alls == labels.len() && tail.is_none())
            }
            _ => false,
        }
    }

    pub fn assert_valid(&self, chain: &Chain) {
        assert!(
            self.is_valid_for(chain),
            "segment {self:?} is not a final segment of this chain",
        );
    }

    /// Whether the segment is closed under shift preimages, i.e. contains
    /// every point whose shift it contains.  On a product chain these are
    /// exactly the tail-free segments (unions of whole blocks).
    pub fn is_saturated(&self, chain: &Chain) -> bool {
        self.assert_valid(chain);
        match self {
            FinalSegment::Suffix { start } => *start == 0 || *start == chain.label_count(),
            FinalSegment::Slices { tail, .. } => tail.is_none(),
        }
    }

    pub fn contains(&self, chain: &Chain, p: &ChainPoint) -> bool {
        self.assert_valid(chain);
        chain.assert_member(p);
        match (self, p) {
            (FinalSegment::Suffix { start }, ChainPoint::Finite(i)) => i >= start,
            (FinalSegment::Slices { alls, tail }, ChainPoint::Product { q, n }) => {
                q < alls || tail.as_ref().is_some_and(|t| q == alls && n >= t)
            }
            _ => unreachable!("segment and point shapes agree after validation"),
        }
    }

    pub fn display(&self, chain: &Chain) -> String {
        self.assert_valid(chain);
        if self.is_empty(chain) {
            return "empty".to_string();
        }
        if self.is_full(chain) {
            return "full".to_string();
        }
        match self {
            FinalSegment::Suffix { start } => format!("{{from:{}}}", chain.labels()[*start]),
            FinalSegment::Slices { alls, tail } => {
                let mut parts: Vec<String> = chain.labels()[..*alls]
                    .iter()
                    .map(|l| format!("{l}:all"))
                    .collect();
                if let Some(t) = tail {
                    parts.push(format!("{}:tail({})", chain.labels()[*alls], t));
                }
                format!("{{{}}}", parts.join(","))
            }
        }
    }
}

/// All final segments whose tail coordinates lie in `window`, in ascending
/// inclusion order, beginning with the empty segment and ending with the
/// full chain.  A finite chain has all of its `L + 1` suffixes regardless of
/// the window; a product chain with `L` blocks contributes
/// `L * (width + 1) + 1` segments.
pub fn enumerate_final_segments(chain: &Chain, window: Window) -> Vec<FinalSegment> {
    match chain {
        Chain::Finite { labels } => (0..=labels.len())
            .rev()
            .map(|start| FinalSegment::Suffix { start })
            .collect(),
        Chain::ProductQZ { labels } => {
            let mut out = vec![FinalSegment::Slices {
                alls: 0,
                tail: None,
            }];
            for alls in 0..labels.len() {
                for n in window.values().rev() {
                    out.push(FinalSegment::Slices {
                        alls,
                        tail: Some(BigInt::from(n)),
                    });
                }
                out.push(FinalSegment::Slices {
                    alls: alls + 1,
                    tail: None,
                });
            }
            out
        }
    }
}

/// The iterates `start, omega(start), omega^2(start), ...`, stopping after
/// `depth` shifts or at the first shift to `Infinity`.
pub fn omega_orbit(chain: &Chain, start: &ChainPoint, depth: usize) -> Vec<ChainPoint> {
    let mut orbit = vec![start.clone()];
    while orbit.len() <= depth {
        match chain.omega(orbit.last().unwrap()) {
            ExtendedPoint::Point(p) => orbit.push(p),
            ExtendedPoint::Infinity => break,
        }
    }
    orbit
}

/// Whether `a` lies below `b` in the quasi-order induced by the shift: some
/// iterate of `a` is at or below some iterate of `b`.
///
/// On a product chain the relation depends only on the blocks: iterating
/// never leaves a block and every point of a lower block is below every
/// point of a higher one, so the relation holds exactly when `b`'s block is
/// not strictly below `a`'s.  On a finite chain every orbit climbs to the
/// top point, so any two points are related; that case is decided by an
/// explicit orbit search.
pub fn qo_omega_leq(chain: &Chain, a: &ChainPoint, b: &ChainPoint) -> bool {
    chain.assert_member(a);
    chain.assert_member(b);
    match (a, b) {
        (ChainPoint::Product { q: qa, .. }, ChainPoint::Product { q: qb, .. }) => qb <= qa,
        (ChainPoint::Finite(_), ChainPoint::Finite(_)) => {
            qo_omega_leq_search(chain, a, b, chain.label_count() + 1)
        }
        _ => unreachable!("both points belong to the same chain"),
    }
}

/// Bounded search deciding the shift quasi-order: compares the smallest
/// point on `a`'s orbit against the largest on `b`'s, each orbit truncated
/// to `depth` shifts.  Conclusive whenever `depth` covers the coordinate
/// distance between `a` and `b`; kept as an oracle for [`qo_omega_leq`].
pub fn qo_omega_leq_search(chain: &Chain, a: &ChainPoint, b: &ChainPoint, depth: usize) -> bool {
    let orbit_a = omega_orbit(chain, a, depth);
    let orbit_b = omega_orbit(chain, b, depth);
    orbit_a.iter().min() <= orbit_b.iter().max()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qz2() -> Chain {
        Chain::product(["q1", "q2"])
    }

    fn abc() -> Chain {
        Chain::finite(["a", "b", "c"])
    }

    #[test]
    fn product_points_order_reverses_labels() {
        let c = qz2();
        assert!(c.point("q2", 100) < c.point("q1", -100));
        assert!(c.point("q1", 0) < c.point("q1", 1));
        assert!(c.point("q2", -3) < c.point("q2", -2));
        assert_eq!(
            c.cmp_points(&c.point("q1", 4), &c.point("q1", 4)),
            Ordering::Equal
        );
    }

    #[test]
    fn finite_points_order_by_position() {
        let c = abc();
        assert!(c.label_point("a") < c.label_point("b"));
        assert!(c.label_point("b") < c.label_point("c"));
    }

    #[test]
    fn infinity_tops_every_point() {
        let c = qz2();
        let x = ExtendedPoint::from(c.point("q1", 1_000_000));
        assert!(x < ExtendedPoint::Infinity);
        assert!(ExtendedPoint::Infinity.is_infinity());
    }

    #[test]
    fn omega_shifts_within_a_block() {
        let c = qz2();
        assert_eq!(
            c.omega(&c.point("q1", 0)),
            ExtendedPoint::from(c.point("q1", 1))
        );
        assert_eq!(
            c.omega(&c.point("q2", -5)),
            ExtendedPoint::from(c.point("q2", -4))
        );
    }

    #[test]
    fn omega_is_the_successor_on_finite_chains() {
        let c = abc();
        assert_eq!(
            c.omega(&c.label_point("a")),
            ExtendedPoint::from(c.label_point("b"))
        );
        assert_eq!(c.omega(&c.label_point("c")), ExtendedPoint::Infinity);
        assert_eq!(c.top(), Some(c.label_point("c")));
        assert_eq!(qz2().top(), None);
    }

    #[test]
    fn omega_strictly_increases() {
        for chain in [qz2(), abc(), Chain::product(["q1"])] {
            for p in chain.points(Window::new(-3, 3)) {
                match chain.omega(&p) {
                    ExtendedPoint::Point(q) => assert!(p < q),
                    ExtendedPoint::Infinity => assert_eq!(chain.top(), Some(p)),
                }
            }
        }
    }

    #[test]
    fn windowed_points_are_sorted_and_complete() {
        let c = qz2();
        let pts = c.points(Window::new(-1, 1));
        assert_eq!(pts.len(), 6);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(pts[0], c.point("q2", -1));
        assert_eq!(pts[5], c.point("q1", 1));
    }

    #[test]
    fn display_names_points_by_label() {
        let c = qz2();
        assert_eq!(c.display_point(&c.point("q2", -3)), "(q2,-3)");
        assert_eq!(abc().display_point(&abc().label_point("b")), "b");
        assert_eq!(c.display_extended(&ExtendedPoint::Infinity), "Infinity");
    }

    #[test]
    #[should_panic(expected = "does not lie on this chain")]
    fn foreign_points_are_rejected() {
        qz2().omega(&ChainPoint::Product {
            q: 5,
            n: BigInt::from(0),
        });
    }

    #[test]
    fn canonical_empty_and_full_segments() {
        let c = qz2();
        assert!(FinalSegment::empty(&c).is_empty(&c));
        assert!(FinalSegment::full(&c).is_full(&c));
        assert_eq!(FinalSegment::empty(&c).display(&c), "empty");
        assert_eq!(FinalSegment::full(&c).display(&c), "full");
        let f = abc();
        assert_eq!(FinalSegment::empty(&f), FinalSegment::Suffix { start: 3 });
        assert_eq!(FinalSegment::full(&f), FinalSegment::Suffix { start: 0 });
    }

    #[test]
    fn segment_membership_follows_blocks_and_tails() {
        let c = qz2();
        let i_q1 = FinalSegment::Slices {
            alls: 1,
            tail: None,
        };
        assert!(i_q1.contains(&c, &c.point("q1", -7)));
        assert!(!i_q1.contains(&c, &c.point("q2", 7)));
        let tail = FinalSegment::Slices {
            alls: 1,
            tail: Some(BigInt::from(3)),
        };
        assert!(tail.contains(&c, &c.point("q2", 3)));
        assert!(!tail.contains(&c, &c.point("q2", 2)));
        assert!(tail.contains(&c, &c.point("q1", -100)));
    }

    #[test]
    fn saturation_flags_tail_free_segments() {
        let c = qz2();
        assert!(FinalSegment::Slices {
            alls: 1,
            tail: None
        }
        .is_saturated(&c));
        assert!(!FinalSegment::Slices {
            alls: 1,
            tail: Some(BigInt::from(0))
        }
        .is_saturated(&c));
        assert!(FinalSegment::full(&c).is_saturated(&c));
        let f = abc();
        assert!(FinalSegment::full(&f).is_saturated(&f));
        assert!(FinalSegment::empty(&f).is_saturated(&f));
        assert!(!FinalSegment::Suffix { start: 1 }.is_saturated(&f));
    }

    #[test]
    fn segments_of_a_two_point_finite_chain() {
        let c = Chain::finite(["a", "b"]);
        let segs = enumerate_final_segments(&c, Window::default());
        assert_eq!(segs.len(), 3);
        assert_eq!(segs[0], FinalSegment::empty(&c));
        assert_eq!(segs[1].display(&c), "{from:b}");
        assert_eq!(segs[2], FinalSegment::full(&c));
    }

    #[test]
    fn segments_of_one_block_in_a_small_window() {
        let c = Chain::product(["q1"]);
        let segs = enumerate_final_segments(&c, Window::new(0, 1));
        let shown: Vec<String> = segs.iter().map(|s| s.display(&c)).collect();
        assert_eq!(shown, ["empty", "{q1:tail(1)}", "{q1:tail(0)}", "full"]);
    }

    #[test]
    fn segment_counts_scale_with_blocks_and_window() {
        let c = qz2();
        assert_eq!(enumerate_final_segments(&c, Window::new(0, 0)).len(), 5);
        let c3 = Chain::product(["q1", "q2", "q3"]);
        for w in [Window::new(-2, 2), Window::new(0, 3)] {
            assert_eq!(
                enumerate_final_segments(&c3, w).len(),
                1 + 3 * (w.width() + 1)
            );
        }
    }

    #[test]
    fn enumerated_segments_ascend_strictly() {
        for (chain, w) in [
            (qz2(), Window::new(-2, 2)),
            (Chain::product(["q1"]), Window::new(0, 1)),
            (abc(), Window::default()),
        ] {
            let segs = enumerate_final_segments(&chain, w);
            for pair in segs.windows(2) {
                assert!(
                    pair[0] < pair[1],
                    "{} !< {}",
                    pair[0].display(&chain),
                    pair[1].display(&chain)
                );
            }
        }
    }

    #[test]
    fn segment_order_agrees_with_inclusion() {
        // Points from an inflated window separate segments whose tails sit
        // at the window edge.
        let w = Window::new(-2, 2);
        for chain in [qz2(), abc()] {
            let segs = enumerate_final_segments(&chain, w);
            let pts = chain.points(w.inflate(2));
            for a in &segs {
                for b in &segs {
                    let subset = pts
                        .iter()
                        .all(|p| !a.contains(&chain, p) || b.contains(&chain, p));
                    assert_eq!(
                        *a <= *b,
                        subset,
                        "{} vs {}",
                        a.display(&chain),
                        b.display(&chain)
                    );
                }
            }
        }
    }

    #[test]
    fn enumerated_segments_are_upward_closed() {
        let chain = qz2();
        let w = Window::new(-2, 2);
        let pts = chain.points(w.inflate(2));
        for seg in enumerate_final_segments(&chain, w) {
            for p in &pts {
                if seg.contains(&chain, p) {
                    for q in &pts {
                        if q > p {
                            assert!(seg.contains(&chain, q));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn orbits_stop_at_infinity() {
        let c = abc();
        assert_eq!(omega_orbit(&c, &c.label_point("a"), 10).len(), 3);
        let q = qz2();
        assert_eq!(omega_orbit(&q, &q.point("q1", 0), 5).len(), 6);
    }

    #[test]
    fn shift_quasiorder_on_product_chains_compares_blocks() {
        let c = qz2();
        let low = c.point("q2", 5);
        let high = c.point("q1", 0);
        assert!(qo_omega_leq(&c, &low, &high));
        assert!(!qo_omega_leq(&c, &high, &low));
        assert!(qo_omega_leq(&c, &c.point("q1", 9), &c.point("q1", -9)));
        assert!(qo_omega_leq(&c, &c.point("q2", -9), &c.point("q2", 9)));
    }

    #[test]
    fn shift_quasiorder_is_total_on_finite_chains() {
        let c = abc();
        for a in c.points(Window::default()) {
            for b in c.points(Window::default()) {
                assert!(qo_omega_leq(&c, &a, &b));
            }
        }
    }

    #[test]
    fn closed_form_matches_orbit_search() {
        let c = qz2();
        let w = Window::new(-4, 4);
        let pts = c.points(w);
        let depth = 2 * w.width() + 4;
        for a in &pts {
            for b in &pts {
                assert_eq!(
                    qo_omega_leq(&c, a, b),
                    qo_omega_leq_search(&c, a, b, depth),
                    "disagree on {} vs {}",
                    c.display_point(a),
                    c.display_point(b)
                );
            }
        }
    }
}
