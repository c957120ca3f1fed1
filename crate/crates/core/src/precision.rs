//! Adaptive-precision enclosures of `c`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

use crate::cform::{CForm, CLevel, LocalSign, Quadratic};
use crate::error::{Error, Result};
use crate::interval::RationalInterval;
use crate::rational::{pow3, Rational};
use crate::ternary::{truncation_numerator, DigitStream, EnumerationMode};

pub const DEFAULT_PRECISION: usize = 128;
pub const PRECISION_CAP: usize = 100_000;

/// Digits used for cheap bounding-box pre-filters.
const COARSE_DIGITS: usize = 24;

/// Certified sign. `Unknown` means the precision cap was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
    Unknown,
}

impl Sign {
    pub fn is_known(self) -> bool {
        self != Sign::Unknown
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
            s => s,
        }
    }
}

/// The constant `c` as a digit stream plus a refinement schedule
/// `start, 4·start, 16·start, …, cap`.
#[derive(Debug)]
pub struct CSource {
    stream: DigitStream,
    schedule: Vec<usize>,
    levels: Vec<OnceLock<std::result::Result<Arc<CLevel>, Error>>>,
    coarse: OnceLock<Option<RationalInterval>>,
    max_used: AtomicUsize,
}

impl CSource {
    pub fn new(stream: DigitStream, start: usize, cap: usize) -> Result<Self> {
        if start == 0 || start > cap {
            return Err(Error::InvalidArgument(format!(
                "precision start {start} must be in 1..={cap}"
            )));
        }
        let mut schedule = vec![start];
        while *schedule.last().unwrap() < cap {
            let next = schedule.last().unwrap().saturating_mul(4).min(cap);
            schedule.push(next);
        }
        let levels = schedule.iter().map(|_| OnceLock::new()).collect();
        Ok(CSource {
            stream,
            schedule,
            levels,
            coarse: OnceLock::new(),
            max_used: AtomicUsize::new(0),
        })
    }

    pub fn canonical() -> Self {
        Self::new(DigitStream::canonical(), DEFAULT_PRECISION, PRECISION_CAP).unwrap()
    }

    pub fn stream(&self) -> &DigitStream {
        &self.stream
    }

    pub fn mode(&self) -> &EnumerationMode {
        self.stream.mode()
    }

    pub fn start(&self) -> usize {
        self.schedule[0]
    }

    pub fn cap(&self) -> usize {
        *self.schedule.last().unwrap()
    }

    /// Largest precision any decision so far has needed.
    pub fn max_precision_used(&self) -> usize {
        self.max_used.load(Ordering::Relaxed).max(self.start())
    }

    fn level(&self, idx: usize) -> Result<Arc<CLevel>> {
        self.levels[idx]
            .get_or_init(|| {
                let p = self.schedule[idx];
                let digits = self.stream.prefix(p)?;
                let t = truncation_numerator(&digits[..p]);
                let scale = pow3(p);
                Ok(Arc::new(CLevel {
                    digits: p,
                    interval: RationalInterval::new(
                        Rational::new(t.clone(), scale.clone()),
                        Rational::new(&t + 1, scale.clone()),
                    ),
                    t_hi: &t + 1,
                    t_lo: t,
                    scale,
                }))
            })
            .clone()
    }

    fn note_used(&self, p: usize) {
        self.max_used.fetch_max(p, Ordering::Relaxed);
    }

    /// Enclosure of `c` at the starting precision.
    pub fn interval(&self) -> Result<RationalInterval> {
        Ok(self.level(0)?.interval.clone())
    }

    /// A short enclosure of `c` with small denominators, for pruning only.
    pub fn coarse_interval(&self) -> Option<&RationalInterval> {
        self.coarse
            .get_or_init(|| {
                let p = COARSE_DIGITS.min(self.start());
                self.stream.c_interval(p).ok()
            })
            .as_ref()
    }

    pub fn interval_at_step(&self, step: usize) -> Result<RationalInterval> {
        Ok(self.level(step)?.interval.clone())
    }

    pub fn steps(&self) -> usize {
        self.schedule.len()
    }

    /// Certified sign of `q(c)`, refining until decided.
    pub fn sign(&self, q: &Quadratic) -> Sign {
        if q.is_identically_zero() {
            return Sign::Zero;
        }
        for idx in 0..self.schedule.len() {
            let Ok(level) = self.level(idx) else {
                return Sign::Unknown;
            };
            match q.sign_on(&level) {
                LocalSign::Positive => {
                    self.note_used(level.digits);
                    return Sign::Positive;
                }
                LocalSign::Negative => {
                    self.note_used(level.digits);
                    return Sign::Negative;
                }
                LocalSign::Zero => return Sign::Zero,
                LocalSign::Undecided => continue,
            }
        }
        self.note_used(self.cap());
        Sign::Unknown
    }

    pub fn sign_affine(&self, f: &CForm) -> Sign {
        self.sign(&f.to_quadratic())
    }

    /// Like [`CSource::sign`], but also returns the enclosure of `q(c)` at
    /// the deciding precision.
    pub fn decide(&self, q: &Quadratic) -> Result<(Sign, RationalInterval, usize)> {
        for idx in 0..self.schedule.len() {
            let level = self.level(idx)?;
            let local = q.sign_on(&level);
            if local != LocalSign::Undecided {
                self.note_used(level.digits);
                let sign = match local {
                    LocalSign::Positive => Sign::Positive,
                    LocalSign::Negative => Sign::Negative,
                    _ => Sign::Zero,
                };
                return Ok((sign, q.enclose(&level.interval), level.digits));
            }
        }
        Err(Error::PrecisionExhausted { cap: self.cap() })
    }

    /// Enclosure of `q(c)` at a given schedule step.
    pub fn enclose(&self, q: &Quadratic, step: usize) -> Result<RationalInterval> {
        Ok(q.enclose(&self.level(step)?.interval))
    }
}

impl Default for CSource {
    fn default() -> Self {
        Self::canonical()
    }
}
