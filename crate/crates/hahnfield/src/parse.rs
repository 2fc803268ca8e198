//! Text forms for chain points, group elements, series and final
//! segments, plus the JSON files describing chains and couples.
//!
//! Each grammar mirrors the matching `display` output, so anything the
//! crate prints parses back to an equal value:
//!
//! * points: `(q1,0)` on product chains, a bare label on finite ones;
//! * group elements: `2@(q1,0) + -1/2@(q2,3)`, or `0`;
//! * series: `3*t{2@(q1,0)} + -1/2*t{0}`, or `0`;
//! * segments: `full`, `empty`, `{q1:all,q2:tail(3)}`, or `{from:g2}` on
//!   finite chains.
//!
//! Segment entries must walk the labels downward from the top of the
//! chain, all-blocks first and at most one trailing `tail`; anything else
//! does not describe a final segment and is rejected.  Errors carry the
//! byte position they were raised at.

use num::{BigInt, BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{Chain, ChainPoint, FinalSegment};
use crate::couple::PsiMap;
use crate::group::GroupElement;
use crate::series::Series;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    end: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0, end: src.len() }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { position: self.pos, message: message.into() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..self.end]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn eat(&mut self, expected: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == expected => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{expected}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{expected}`, found end of input"))),
        }
    }

    fn eat_if(&mut self, expected: char) -> bool {
        if self.peek() == Some(expected) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> Result<&'a str, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.bump();
        }
        if self.pos == start {
            return Err(self.error("expected a word"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.bump();
        }
        let digits = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == digits {
            return Err(ParseError { position: start, message: "expected an integer".into() });
        }
        Ok(self.src[start..self.pos].parse().expect("digits form an integer"))
    }

    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let numer = self.integer()?;
        if !self.eat_if('/') {
            return Ok(BigRational::from_integer(numer));
        }
        let denom_pos = self.pos;
        let denom = self.integer()?;
        if !denom.is_positive() {
            return Err(ParseError {
                position: denom_pos,
                message: "the denominator must be positive".into(),
            });
        }
        Ok(BigRational::new(numer, denom))
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos < self.end {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(())
    }
}

fn known_label(chain: &Chain, cur: &mut Cursor) -> Result<usize, ParseError> {
    let position = cur.pos;
    let label = cur.word()?;
    chain
        .label_index(label)
        .ok_or(ParseError { position, message: format!("unknown label `{label}`") })
}

fn point_expr(chain: &Chain, cur: &mut Cursor) -> Result<ChainPoint, ParseError> {
    cur.skip_ws();
    if !chain.is_product() {
        return Ok(ChainPoint::Finite(known_label(chain, cur)?));
    }
    cur.eat('(')?;
    cur.skip_ws();
    let q = known_label(chain, cur)?;
    cur.skip_ws();
    cur.eat(',')?;
    cur.skip_ws();
    let n = cur.integer()?;
    cur.skip_ws();
    cur.eat(')')?;
    Ok(ChainPoint::Product { q, n })
}

fn group_expr(chain: &Chain, cur: &mut Cursor) -> Result<GroupElement, ParseError> {
    let mut terms = Vec::new();
    loop {
        cur.skip_ws();
        let coeff = cur.rational()?;
        cur.skip_ws();
        if cur.eat_if('@') {
            terms.push((point_expr(chain, cur)?, coeff));
        } else if !coeff.is_zero() {
            return Err(cur.error("a nonzero term needs `@` and a point"));
        }
        cur.skip_ws();
        if !cur.eat_if('+') {
            break;
        }
    }
    Ok(GroupElement::from_terms(terms))
}

fn series_expr(chain: &Chain, cur: &mut Cursor) -> Result<Series, ParseError> {
    let mut out = Series::zero();
    loop {
        cur.skip_ws();
        let coeff = cur.rational()?;
        cur.skip_ws();
        if cur.eat_if('*') {
            cur.skip_ws();
            cur.eat('t')?;
            cur.eat('{')?;
            let close = cur
                .rest()
                .find('}')
                .ok_or_else(|| cur.error("unclosed `{` in a monomial"))?;
            let outer_end = cur.end;
            cur.end = cur.pos + close;
            let exponent = group_expr(chain, cur)?;
            cur.expect_end()?;
            cur.end = outer_end;
            cur.eat('}')?;
            out.add_term(exponent, coeff);
        } else if !coeff.is_zero() {
            return Err(cur.error("a nonzero series term needs `*t{exponent}`"));
        }
        cur.skip_ws();
        if !cur.eat_if('+') {
            break;
        }
    }
    Ok(out)
}

fn braced_segment(chain: &Chain, cur: &mut Cursor) -> Result<FinalSegment, ParseError> {
    cur.eat('{')?;
    cur.skip_ws();
    if !chain.is_product() {
        let key_pos = cur.pos;
        let key = cur.word()?;
        if key != "from" {
            return Err(ParseError {
                position: key_pos,
                message: "segments of a finite chain are written `{from:label}`".into(),
            });
        }
        cur.skip_ws();
        cur.eat(':')?;
        cur.skip_ws();
        let start = known_label(chain, cur)?;
        cur.skip_ws();
        cur.eat('}')?;
        return Ok(FinalSegment::Suffix { start });
    }
    let mut alls = 0usize;
    let mut tail: Option<BigInt> = None;
    loop {
        let label_pos = cur.pos;
        let q = known_label(chain, cur)?;
        if tail.is_some() {
            return Err(ParseError {
                position: label_pos,
                message: "no entry may follow a `tail` entry".into(),
            });
        }
        if q != alls {
            return Err(ParseError {
                position: label_pos,
                message: format!(
                    "expected `{}` here: a final segment walks the labels \
                     downward from the top of the chain",
                    chain.labels()[alls]
                ),
            });
        }
        cur.skip_ws();
        cur.eat(':')?;
        cur.skip_ws();
        let kind_pos = cur.pos;
        match cur.word()? {
            "all" => alls += 1,
            "tail" => {
                cur.skip_ws();
                cur.eat('(')?;
                cur.skip_ws();
                tail = Some(cur.integer()?);
                cur.skip_ws();
                cur.eat(')')?;
            }
            other => {
                return Err(ParseError {
                    position: kind_pos,
                    message: format!("expected `all` or `tail(n)`, found `{other}`"),
                })
            }
        }
        cur.skip_ws();
        if cur.eat_if(',') {
            cur.skip_ws();
            continue;
        }
        break;
    }
    cur.eat('}')?;
    Ok(FinalSegment::Slices { alls, tail })
}

pub fn parse_point(chain: &Chain, src: &str) -> Result<ChainPoint, ParseError> {
    let mut cur = Cursor::new(src);
    let point = point_expr(chain, &mut cur)?;
    cur.expect_end()?;
    Ok(point)
}

pub fn parse_group(chain: &Chain, src: &str) -> Result<GroupElement, ParseError> {
    let mut cur = Cursor::new(src);
    let g = group_expr(chain, &mut cur)?;
    cur.expect_end()?;
    Ok(g)
}

pub fn parse_series(chain: &Chain, src: &str) -> Result<Series, ParseError> {
    let mut cur = Cursor::new(src);
    let s = series_expr(chain, &mut cur)?;
    cur.expect_end()?;
    Ok(s)
}

pub fn parse_segment(chain: &Chain, src: &str) -> Result<FinalSegment, ParseError> {
    let mut cur = Cursor::new(src);
    cur.skip_ws();
    let segment = if cur.peek() == Some('{') {
        braced_segment(chain, &mut cur)?
    } else {
        let keyword_pos = cur.pos;
        match cur.word()? {
            "full" => FinalSegment::full(chain),
            "empty" => FinalSegment::empty(chain),
            other => {
                return Err(ParseError {
                    position: keyword_pos,
                    message: format!("expected `full`, `empty` or `{{`, found `{other}`"),
                })
            }
        }
    };
    cur.expect_end()?;
    segment.assert_valid(chain);
    Ok(segment)
}

/// The JSON description of a chain: `{"kind":"product","q":[...]}` or
/// `{"kind":"finite","labels":[...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChainFile {
    Product { q: Vec<String> },
    Finite { labels: Vec<String> },
}

/// The JSON description of a couple: a chain plus the offset of its class
/// map, written in the group-element grammar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoupleFile {
    pub chain: ChainFile,
    pub offset: String,
}

#[derive(Debug, Error)]
pub enum FileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("the chain needs at least one label")]
    EmptyChain,
    #[error("invalid chain label {0:?}")]
    InvalidLabel(String),
    #[error("chain label {0:?} appears more than once")]
    DuplicateLabel(String),
    #[error("invalid offset: {0}")]
    Offset(ParseError),
}

impl ChainFile {
    pub fn of(chain: &Chain) -> ChainFile {
        let labels = chain.labels().to_vec();
        if chain.is_product() {
            ChainFile::Product { q: labels }
        } else {
            ChainFile::Finite { labels }
        }
    }

    pub fn build(&self) -> Result<Chain, FileError> {
        let labels = match self {
            ChainFile::Product { q } => q,
            ChainFile::Finite { labels } => labels,
        };
        if labels.is_empty() {
            return Err(FileError::EmptyChain);
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(FileError::InvalidLabel(label.clone()));
            }
            if labels[..i].contains(label) {
                return Err(FileError::DuplicateLabel(label.clone()));
            }
        }
        Ok(match self {
            ChainFile::Product { q } => Chain::product(q.iter().map(String::as_str)),
            ChainFile::Finite { labels } => Chain::finite(labels.iter().map(String::as_str)),
        })
    }
}

pub fn parse_chain_file(src: &str) -> Result<Chain, FileError> {
    let file: ChainFile = serde_json::from_str(src)?;
    file.build()
}

pub fn parse_couple_file(src: &str) -> Result<PsiMap, FileError> {
    let file: CoupleFile = serde_json::from_str(src)?;
    let chain = file.chain.build()?;
    let offset = parse_group(&chain, &file.offset).map_err(FileError::Offset)?;
    Ok(PsiMap::new(chain, offset))
}

pub fn chain_file(chain: &Chain) -> String {
    serde_json::to_string_pretty(&ChainFile::of(chain)).expect("chain files serialize")
}

pub fn couple_file(couple: &PsiMap) -> String {
    let file = CoupleFile {
        chain: ChainFile::of(couple.chain()),
        offset: couple.offset().display(couple.chain()),
    };
    serde_json::to_string_pretty(&file).expect("couple files serialize")
}
