//! Planar kernel for the system `{S_0, S_1, S_2, S_h}`:
//!
//! ```text
//! S_j(x, y) = ((x + j)/3, y/3)     j = 0, 1, 2
//! S_h(x, y) = (c − h·y, h·x)
//! ```
//!
//! Coordinates are exact affine forms in `c` ([`CForm`]); enclosures are
//! produced on demand from a [`CSource`].

mod predicates;

pub use predicates::{
    boxes_apart, coarse_box, interiors_disjoint, orientation, point_in_triangle, triangle_contains,
    triangles_relation, BoundingBox, InteriorRelation, Location, Relation,
};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::cform::CForm;
use crate::error::{Error, Result};
use crate::interval::RationalInterval;
use crate::precision::CSource;
use crate::rational::{format_rational, frac, int, inv_pow3, Rational};
use crate::ternary::truncation_value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Zero,
    One,
    Two,
    H,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::Zero, Letter::One, Letter::Two, Letter::H];
    pub const I: [Letter; 3] = [Letter::Zero, Letter::One, Letter::Two];

    /// Digit value for `0`, `1`, `2`; `None` for `h`.
    pub fn digit(self) -> Option<u8> {
        match self {
            Letter::Zero => Some(0),
            Letter::One => Some(1),
            Letter::Two => Some(2),
            Letter::H => None,
        }
    }

    pub fn from_digit(d: u8) -> Option<Letter> {
        match d {
            0 => Some(Letter::Zero),
            1 => Some(Letter::One),
            2 => Some(Letter::Two),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::Zero => '0',
            Letter::One => '1',
            Letter::Two => '2',
            Letter::H => 'h',
        }
    }
}

impl TryFrom<char> for Letter {
    type Error = Error;
    fn try_from(ch: char) -> Result<Letter> {
        match ch {
            '0' => Ok(Letter::Zero),
            '1' => Ok(Letter::One),
            '2' => Ok(Letter::Two),
            'h' => Ok(Letter::H),
            _ => Err(Error::InvalidArgument(format!("unknown letter {ch:?}"))),
        }
    }
}

/// Finite word over `{0, 1, 2, h}`; the empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        digits
            .iter()
            .map(|&d| {
                Letter::from_digit(d)
                    .ok_or_else(|| Error::InvalidArgument(format!("digit {d} not in {{0,1,2}}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Word over `I = {0,1,2}` only.
    pub fn is_i_word(&self) -> bool {
        self.0.iter().all(|l| *l != Letter::H)
    }

    /// Digits of an I-word.
    pub fn digits(&self) -> Option<Vec<u8>> {
        self.0.iter().map(|l| l.digit()).collect()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&self, letter: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn suffix_from(&self, n: usize) -> Word {
        Word(self.0[n.min(self.0.len())..].to_vec())
    }

    pub fn common_prefix_len(&self, other: &Word) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .take_while(|(a, b)| a == b)
            .count()
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|l| **l == letter).count()
    }

    /// All words of exactly `n` letters from `alphabet`, in lexicographic order.
    pub fn all_of_length(alphabet: &[Letter], n: usize) -> Vec<Word> {
        let mut words = vec![Word::empty()];
        for _ in 0..n {
            words = words
                .iter()
                .flat_map(|w| alphabet.iter().map(move |&l| w.push(l)))
                .collect();
        }
        words
    }

    /// All nonempty I-words of length `1..=max_len`, shorter first.
    pub fn i_words_up_to(max_len: usize) -> Vec<Word> {
        (1..=max_len)
            .flat_map(|n| Word::all_of_length(&Letter::I, n))
            .collect()
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        if s == "ε" {
            return Ok(Word::empty());
        }
        s.chars()
            .map(Letter::try_from)
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point2 {
    pub x: CForm,
    pub y: CForm,
}

impl Point2 {
    pub fn new(x: CForm, y: CForm) -> Self {
        Point2 { x, y }
    }

    pub fn exact(x: Rational, y: Rational) -> Self {
        Point2::new(CForm::constant(x), CForm::constant(y))
    }

    pub fn origin() -> Self {
        Point2::exact(Rational::zero(), Rational::zero())
    }

    /// The point `(c, 0)`.
    pub fn c_on_axis() -> Self {
        Point2::new(CForm::c(), CForm::zero())
    }

    /// Free of `c`.
    pub fn is_exact(&self) -> bool {
        self.x.b.is_zero() && self.y.b.is_zero()
    }

    /// Interval box `(x, y)` at the source's starting precision.
    pub fn enclose(&self, c: &RationalInterval) -> (RationalInterval, RationalInterval) {
        (self.x.enclose(c), self.y.enclose(c))
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `p ↦ M·p + t` with `M = ratio · (rotation or reflection)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Similarity {
    pub linear: [[Rational; 2]; 2],
    pub translation: Point2,
    pub ratio: Rational,
}

impl Similarity {
    pub fn identity() -> Self {
        Similarity {
            linear: [[int(1), int(0)], [int(0), int(1)]],
            translation: Point2::origin(),
            ratio: int(1),
        }
    }

    pub fn apply(&self, p: &Point2) -> Point2 {
        let [[a, b], [c, d]] = &self.linear;
        Point2 {
            x: &(&p.x.scale(a) + &p.y.scale(b)) + &self.translation.x,
            y: &(&p.x.scale(c) + &p.y.scale(d)) + &self.translation.y,
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Similarity) -> Similarity {
        let m = &self.linear;
        let n = &inner.linear;
        let entry = |i: usize, j: usize| &m[i][0] * &n[0][j] + &m[i][1] * &n[1][j];
        let linear = [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]];
        Similarity {
            linear,
            translation: self.apply(&inner.translation),
            ratio: &self.ratio * &inner.ratio,
        }
    }

    pub fn apply_triangle(&self, t: &Triangle) -> Triangle {
        Triangle {
            v: [
                self.apply(&t.v[0]),
                self.apply(&t.v[1]),
                self.apply(&t.v[2]),
            ],
        }
    }

    /// Columns orthogonal with equal norm `ratio`, and `ratio < 1`.
    pub fn is_contracting_similarity(&self) -> bool {
        let [[a, b], [c, d]] = &self.linear;
        let n1 = a * a + c * c;
        let n2 = b * b + d * d;
        let dot = a * b + c * d;
        let r2 = &self.ratio * &self.ratio;
        dot.is_zero() && n1 == n2 && n1 == r2 && self.ratio.is_positive() && self.ratio < int(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triangle {
    pub v: [Point2; 3],
}

impl Triangle {
    pub fn new(a: Point2, b: Point2, c: Point2) -> Self {
        Triangle { v: [a, b, c] }
    }

    /// Twice the signed area, as a quadratic in `c`.
    pub fn doubled_area(&self) -> crate::cform::Quadratic {
        orientation(&self.v[0], &self.v[1], &self.v[2])
    }

    pub fn centroid(&self) -> Point2 {
        let third = frac(1, 3);
        Point2 {
            x: (&(&self.v[0].x + &self.v[1].x) + &self.v[2].x).scale(&third),
            y: (&(&self.v[0].y + &self.v[1].y) + &self.v[2].y).scale(&third),
        }
    }

    /// Axis-aligned box of the vertex enclosures.
    pub fn bounding_box(&self, c: &RationalInterval) -> (RationalInterval, RationalInterval) {
        let (mut bx, mut by) = self.v[0].enclose(c);
        for p in &self.v[1..] {
            let (x, y) = p.enclose(c);
            bx = bx.hull(&x);
            by = by.hull(&y);
        }
        (bx, by)
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.v[0], self.v[1], self.v[2])
    }
}

/// The system at a fixed rational `h`, with `c` drawn from a [`CSource`].
#[derive(Debug, Clone)]
pub struct System {
    h: Rational,
    c: Arc<CSource>,
    generators: [Similarity; 4],
}

impl System {
    /// Requires `0 < h < 1`.
    pub fn new(h: Rational, c: Arc<CSource>) -> Result<Self> {
        if !(h.is_positive() && h < Rational::one()) {
            return Err(Error::InvalidArgument(format!(
                "h = {} must satisfy 0 < h < 1",
                format_rational(&h)
            )));
        }
        let generators = Letter::ALL.map(|l| generator(l, &h));
        Ok(System { h, c, generators })
    }

    /// `h = 2/9` over the Canonical stream.
    pub fn standard() -> Self {
        System::new(frac(2, 9), Arc::new(CSource::canonical())).unwrap()
    }

    pub fn h(&self) -> &Rational {
        &self.h
    }

    pub fn c(&self) -> &CSource {
        &self.c
    }

    pub fn c_source(&self) -> Arc<CSource> {
        self.c.clone()
    }

    pub fn generator(&self, letter: Letter) -> &Similarity {
        &self.generators[letter as usize]
    }

    /// `S_{w1} ∘ S_{w2} ∘ … ∘ S_{wn}`; the leftmost letter is applied last.
    pub fn compose(&self, word: &Word) -> Similarity {
        word.letters()
            .iter()
            .fold(Similarity::identity(), |acc, &l| {
                acc.compose(self.generator(l))
            })
    }

    /// `S_word(c) = 3^(−n)·c + 0.w₁…wₙ` for an I-word, as an exact form.
    pub fn c_image_form(&self, word: &Word) -> Result<CForm> {
        let digits = word
            .digits()
            .ok_or_else(|| Error::InvalidArgument(format!("{word} is not an I-word")))?;
        Ok(CForm {
            a: truncation_value(&digits),
            b: inv_pow3(digits.len()),
        })
    }

    /// Enclosure of `c_w` at the source's starting precision.
    pub fn c_image(&self, word: &Word) -> Result<RationalInterval> {
        if word.is_empty() {
            return Err(Error::InvalidArgument(
                "c_image needs a nonempty word".into(),
            ));
        }
        let digits = word
            .digits()
            .ok_or_else(|| Error::InvalidArgument(format!("{word} is not an I-word")))?;
        let c = self.c.interval()?;
        Ok(c.scale(&inv_pow3(digits.len()))
            .shift(&truncation_value(&digits)))
    }

    /// `D` with vertices `(0,0)`, `(1,0)`, `(c,h)`, without the invariance check.
    pub fn d(&self) -> Triangle {
        Triangle::new(
            Point2::origin(),
            Point2::exact(int(1), int(0)),
            Point2::new(CForm::c(), CForm::constant(self.h.clone())),
        )
    }

    /// `D`, after certifying `S_a(D) ⊆ D` for each generator.
    pub fn base_triangle(&self) -> Result<Triangle> {
        let d = self.d();
        for letter in Letter::ALL {
            let image = self.generator(letter).apply_triangle(&d);
            if triangle_contains(&d, &image, &self.c) != Some(true) {
                return Err(Error::NotInvariant {
                    letter: letter.symbol(),
                    h: format_rational(&self.h),
                });
            }
        }
        Ok(d)
    }

    /// `Δ = S_h(D)`.
    pub fn delta(&self) -> Triangle {
        self.generator(Letter::H).apply_triangle(&self.d())
    }

    /// `Δ_w = S_w(Δ)` for an I-word (or the empty word).
    pub fn delta_triangle(&self, word: &Word) -> Result<Triangle> {
        if !word.is_i_word() {
            return Err(Error::InvalidArgument(format!("{word} is not an I-word")));
        }
        Ok(self.compose(word).apply_triangle(&self.delta()))
    }

    /// Hull cell `S_w(D)`.
    pub fn cell_hull(&self, word: &Word) -> Triangle {
        self.compose(word).apply_triangle(&self.d())
    }

    pub fn relation(&self, a: &Triangle, b: &Triangle) -> Relation {
        triangles_relation(a, b, &self.c)
    }
}

/// Generator similarity for one letter.
pub fn generator(letter: Letter, h: &Rational) -> Similarity {
    match letter.digit() {
        Some(j) => Similarity {
            linear: [[frac(1, 3), int(0)], [int(0), frac(1, 3)]],
            translation: Point2::exact(frac(i64::from(j), 3), int(0)),
            ratio: frac(1, 3),
        },
        None => Similarity {
            linear: [[int(0), -h.clone()], [h.clone(), int(0)]],
            translation: Point2::c_on_axis(),
            ratio: h.clone(),
        },
    }
}
