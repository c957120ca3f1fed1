//! Certified separation checks for the system at a fixed `h`.
//!
//! For an I-word `j` of length `n` write `c_j = S_j(c)`. The gap between
//! `c_j` and `c` controls whether the small copies of `Δ` hanging off the
//! unit segment stay clear of each other:
//!
//! ```text
//! c_j < c:  h² < 3ⁿ·(c − c_j)·c
//! c_j > c:  h² < 3ⁿ·(c_j − c)
//! ```
//!
//! [`verify_separation`] checks these for every word up to a depth;
//! [`verify_pairwise_disjoint`], [`verify_osc`] and [`verify_one_point`]
//! check the geometric consequences directly.

mod one_point;
mod pairs;

pub use one_point::verify_one_point;
pub use pairs::{verify_osc, verify_pairwise_disjoint};

use std::fmt;

use rayon::prelude::*;

use crate::cform::{CForm, Quadratic};
use crate::error::{Error, Result};
use crate::geometry::{System, Word};
use crate::interval::RationalInterval;
use crate::precision::Sign;
use crate::rational::{format_rational, frac, inv_pow3, pow3, Rational};
use crate::report::{Outcome, VerificationReport};

/// Which side of `c` the image `c_j` falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Below,
    Above,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Below => "below",
            Side::Above => "above",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseKind {
    /// `c_j < c`, word is the first `n` digits of `c`.
    BelowPrefix,
    /// `c_j < c`, word leaves the digits of `c` after `k` letters.
    BelowDiverging,
    AbovePrefix,
    AboveDiverging,
    /// The word `1`.
    One,
    /// The word `11`.
    OneOne,
}

impl CaseKind {
    pub fn label(self) -> &'static str {
        match self {
            CaseKind::BelowPrefix => "1a",
            CaseKind::BelowDiverging => "1b",
            CaseKind::AbovePrefix => "2a",
            CaseKind::AboveDiverging => "2b",
            CaseKind::One => "2c",
            CaseKind::OneOne => "2d",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CaseTag {
    pub kind: CaseKind,
    /// Length of the common prefix with the digits of `c`, for the
    /// diverging cases.
    pub k: Option<usize>,
    pub n: usize,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "{} k={k}", self.kind.label()),
            None => f.write_str(self.kind.label()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginRecord {
    pub word: Word,
    pub side: Side,
    /// `3ⁿ(c − c_j)·c` below, `3ⁿ(c_j − c)` above.
    pub scaled_gap: RationalInterval,
    /// `3ⁿ·|c − c_j|`, without the extra factor on the lower side.
    pub unfactored_gap: RationalInterval,
    pub required: Rational,
    pub pass: bool,
    pub case: CaseTag,
    pub precision: usize,
}

impl MarginRecord {
    pub fn margin(&self) -> Rational {
        self.scaled_gap.lo() - &self.required
    }

    fn witness(&self) -> String {
        format!(
            "word={} side={} case={} scaled_gap={} unfactored_gap={} required={}",
            self.word,
            self.side,
            self.case,
            self.scaled_gap,
            self.unfactored_gap,
            format_rational(&self.required)
        )
    }
}

/// `c_j − c` as an exact form.
fn offset_form(system: &System, word: &Word) -> Result<CForm> {
    if word.is_empty() {
        return Err(Error::InvalidArgument("word must be nonempty".into()));
    }
    Ok(&system.c_image_form(word)? - &CForm::c())
}

fn side_of(system: &System, offset: &CForm) -> Result<Side> {
    match system.c().sign_affine(offset) {
        Sign::Negative => Ok(Side::Below),
        Sign::Positive => Ok(Side::Above),
        // c_j = c would make c rational
        Sign::Zero => Err(Error::InvalidArgument("c_j coincides with c".into())),
        Sign::Unknown => Err(Error::PrecisionExhausted {
            cap: system.c().cap(),
        }),
    }
}

/// Which case of the separation argument a word falls under.
pub fn classify_case(system: &System, word: &Word) -> Result<CaseTag> {
    let offset = offset_form(system, word)?;
    let side = side_of(system, &offset)?;
    let n = word.len();
    let digits = word.digits().expect("checked by offset_form");
    let tag = |kind, k| Ok(CaseTag { kind, k, n });
    match digits.as_slice() {
        [1] => return tag(CaseKind::One, None),
        [1, 1] => return tag(CaseKind::OneOne, None),
        _ => {}
    }
    let c_digits = system.c().stream().c_digits(n)?;
    let k = digits
        .iter()
        .zip(&c_digits)
        .take_while(|(a, b)| a == b)
        .count();
    match (side, k == n) {
        (Side::Below, true) => tag(CaseKind::BelowPrefix, None),
        (Side::Above, true) => tag(CaseKind::AbovePrefix, None),
        (Side::Below, false) => tag(CaseKind::BelowDiverging, Some(k)),
        (Side::Above, false) => tag(CaseKind::AboveDiverging, Some(k)),
    }
}

/// Certified gap for one word against `h²`.
pub fn margin(system: &System, word: &Word) -> Result<MarginRecord> {
    let case = classify_case(system, word)?;
    let offset = offset_form(system, word)?;
    let side = side_of(system, &offset)?;
    let scale = Rational::from_integer(pow3(word.len()));
    let distance = match side {
        Side::Below => -&offset,
        Side::Above => offset,
    }
    .scale(&scale);
    let gap: Quadratic = match side {
        Side::Below => &distance * &CForm::c(),
        Side::Above => distance.to_quadratic(),
    };
    let required = system.h() * system.h();
    let test = &gap - &Quadratic::constant(required.clone());
    let (sign, slack, digits) = system.c().decide(&test)?;
    let c_at = system.c().stream().c_interval(digits)?;
    Ok(MarginRecord {
        word: word.clone(),
        side,
        scaled_gap: slack.shift(&required),
        unfactored_gap: distance.enclose(&c_at),
        required,
        pass: sign == Sign::Positive,
        case,
        precision: digits,
    })
}

/// Result of checking a word's case-specific lower bound on `|c − c_j|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseBound {
    pub case: CaseTag,
    /// Enclosure of the bounded quantity at the deciding precision.
    pub value: RationalInterval,
    pub bound: Rational,
    pub holds: bool,
}

impl CaseBound {
    /// Diverging-case bounds are recorded but not required to hold.
    pub fn is_flag_only(&self) -> bool {
        matches!(
            self.case.kind,
            CaseKind::BelowDiverging | CaseKind::AboveDiverging
        )
    }
}

/// Checks the lower bound the case analysis gives for a word:
///
/// | case | quantity | bound |
/// |---|---|---|
/// | 1a, 2a | `\|c − c_j\|` | `3^(−n−2)` |
/// | 1b, 2b | `\|c − c_j\|` | `3^(−k−1)` |
/// | 2c | `3·(c_j − c)` | `4/81` |
/// | 2d | `9·(c_j − c)` | `2/9` |
pub fn case_bound_check(system: &System, word: &Word) -> Result<CaseBound> {
    let case = classify_case(system, word)?;
    let offset = offset_form(system, word)?;
    let above = matches!(
        case.kind,
        CaseKind::AbovePrefix | CaseKind::AboveDiverging | CaseKind::One | CaseKind::OneOne
    );
    let distance = if above { offset } else { -&offset };
    let (quantity, bound) = match case.kind {
        CaseKind::BelowPrefix | CaseKind::AbovePrefix => (distance, inv_pow3(case.n + 2)),
        CaseKind::BelowDiverging | CaseKind::AboveDiverging => {
            (distance, inv_pow3(case.k.unwrap_or(0) + 1))
        }
        CaseKind::One => (distance.scale(&frac(3, 1)), frac(4, 81)),
        CaseKind::OneOne => (distance.scale(&frac(9, 1)), frac(2, 9)),
    };
    let test = (&quantity - &CForm::constant(bound.clone())).to_quadratic();
    let (sign, slack, _) = system.c().decide(&test)?;
    Ok(CaseBound {
        case,
        value: slack.shift(&bound),
        bound,
        holds: sign == Sign::Positive,
    })
}

fn require_depth(max_depth: usize, min: usize) -> Result<()> {
    if max_depth < min {
        return Err(Error::InvalidArgument(format!(
            "depth must be at least {min}"
        )));
    }
    Ok(())
}

/// Runs [`margin`] for every I-word of length `1..=max_depth`.
pub fn verify_separation(system: &System, max_depth: usize) -> Result<VerificationReport> {
    require_depth(max_depth, 1)?;
    let words = Word::i_words_up_to(max_depth);
    let results: Vec<Result<MarginRecord>> = words.par_iter().map(|w| margin(system, w)).collect();

    let mut report = VerificationReport::new("separation", max_depth);
    report.items_checked = words.len() as u64;
    report.precision_digits = system.c().start();
    let mut best: Option<&MarginRecord> = None;
    let mut unfactored_min: Option<Rational> = None;
    for (word, result) in words.iter().zip(&results) {
        match result {
            Ok(rec) => {
                report.precision_digits = report.precision_digits.max(rec.precision);
                if !rec.pass {
                    report.record_failure(Outcome::Fail, rec.witness());
                }
                if best.is_none_or(|b| rec.margin() < b.margin()) {
                    best = Some(rec);
                }
                let u = rec.unfactored_gap.lo().clone();
                if unfactored_min.as_ref().is_none_or(|m| &u < m) {
                    unfactored_min = Some(u);
                }
            }
            Err(e) => {
                report.precision_digits = system.c().cap();
                report.record_failure(Outcome::Inconclusive, format!("word={word} {e}"));
            }
        }
    }
    if let Some(b) = best {
        report.min_margin = Some(b.margin());
        report.add_detail("min_word", &b.word);
        report.add_detail("min_side", b.side);
    }
    if let Some(u) = unfactored_min {
        report.add_detail("min_unfactored_gap", format_rational(&u));
    }
    Ok(report)
}

/// Checks every case bound for I-words of length `1..=max_depth`.
///
/// Only the prefix cases and the two special words decide the result; a
/// diverging-case word whose bound fails is counted in the details.
pub fn verify_case_bounds(system: &System, max_depth: usize) -> Result<VerificationReport> {
    require_depth(max_depth, 1)?;
    let words = Word::i_words_up_to(max_depth);
    let results: Vec<Result<CaseBound>> = words
        .par_iter()
        .map(|w| case_bound_check(system, w))
        .collect();

    let mut report = VerificationReport::new("case-bounds", max_depth);
    report.items_checked = words.len() as u64;
    report.precision_digits = system.c().start();
    let mut required = 0u64;
    let mut flagged = 0u64;
    let mut first_flagged = None;
    for (word, result) in words.iter().zip(&results) {
        match result {
            Ok(cb) if cb.is_flag_only() => {
                if !cb.holds {
                    flagged += 1;
                    first_flagged.get_or_insert_with(|| word.to_string());
                }
            }
            Ok(cb) => {
                required += 1;
                let slack = cb.value.lo() - &cb.bound;
                report.note_margin(slack);
                if !cb.holds {
                    report.record_failure(
                        Outcome::Fail,
                        format!(
                            "word={word} case={} value={} bound={}",
                            cb.case,
                            cb.value,
                            format_rational(&cb.bound)
                        ),
                    );
                }
            }
            Err(e) => report.record_failure(Outcome::Inconclusive, format!("word={word} {e}")),
        }
    }
    report.add_detail("required_words", required);
    report.add_detail("flagged_diverging", flagged);
    if let Some(w) = first_flagged {
        report.add_detail("first_flagged", w);
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
