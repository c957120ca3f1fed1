//! Pairwise disjointness of the `Δ`-family and the open set condition.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::cform::CForm;
use crate::error::Result;
use crate::geometry::{
    boxes_apart, coarse_box, interiors_disjoint, triangle_contains, triangles_relation,
    InteriorRelation, Letter, Relation, System, Triangle, Word,
};
use crate::precision::Sign;
use crate::rational::frac;
use crate::report::{Outcome, VerificationReport};

use super::require_depth;

const MAX_WITNESSES: usize = 10;

/// The empty word followed by every I-word of length `1..=max_depth`.
fn family_words(max_depth: usize) -> Vec<Word> {
    let mut words = vec![Word::empty()];
    words.extend(Word::i_words_up_to(max_depth));
    words
}

/// `Δ_u` lies in `S_a(D)` and strictly inside the strip `a/3 < x < (a+1)/3`,
/// where `a` is the first letter of `u`.
fn in_open_strip(system: &System, u: &Word, delta_u: &Triangle) -> Option<bool> {
    let a = u.letters()[0];
    let j = i64::from(a.digit().expect("I-word"));
    let left = frac(j, 3);
    let right = frac(j + 1, 3);
    let cell = system.cell_hull(&Word::new(vec![a]));
    let mut verdict = triangle_contains(&cell, delta_u, system.c())?;
    for p in &delta_u.v {
        let above_left = system
            .c()
            .sign_affine(&(&p.x - &CForm::constant(left.clone())));
        let below_right = system
            .c()
            .sign_affine(&(&p.x - &CForm::constant(right.clone())));
        if above_left == Sign::Unknown || below_right == Sign::Unknown {
            return None;
        }
        verdict &= above_left == Sign::Positive && below_right == Sign::Negative;
    }
    Some(verdict)
}

/// Relation of `Δ_i` and `Δ_j` after removing the common prefix.
///
/// A similarity preserves disjointness, so only the residual words matter:
/// either one is empty (compare `Δ` with `Δ_v`), or they start with
/// different letters and sit in different open strips.
fn reduced_relation(
    system: &System,
    i: &Word,
    j: &Word,
    deltas: &HashMap<Word, Triangle>,
    strips: &HashMap<Word, Option<bool>>,
) -> Relation {
    let k = i.common_prefix_len(j);
    let (u, v) = (i.suffix_from(k), j.suffix_from(k));
    if !u.is_empty() && !v.is_empty() {
        match (strips[&u], strips[&v]) {
            (Some(true), Some(true)) => return Relation::Disjoint,
            (None, _) | (_, None) => return Relation::Unknown,
            _ => {}
        }
    }
    triangles_relation(&deltas[&u], &deltas[&v], system.c())
}

/// All pairs among `Δ` and `Δ_w` for I-words `1 ≤ |w| ≤ max_depth`,
/// checked both directly and through the common-prefix reduction.
pub fn verify_pairwise_disjoint(system: &System, max_depth: usize) -> Result<VerificationReport> {
    require_depth(max_depth, 1)?;
    let words = family_words(max_depth);
    let triangles: Vec<Triangle> = words
        .par_iter()
        .map(|w| system.delta_triangle(w))
        .collect::<Result<_>>()?;
    let boxes: Vec<_> = triangles
        .iter()
        .map(|t| coarse_box(t, system.c()))
        .collect();
    let deltas: HashMap<Word, Triangle> = words
        .iter()
        .cloned()
        .zip(triangles.iter().cloned())
        .collect();
    let strips: HashMap<Word, Option<bool>> = words
        .par_iter()
        .filter(|w| !w.is_empty())
        .map(|w| (w.clone(), in_open_strip(system, w, &deltas[w])))
        .collect();

    let pairs: Vec<(usize, usize)> = (0..words.len())
        .flat_map(|a| (a + 1..words.len()).map(move |b| (a, b)))
        .collect();
    let verdicts: Vec<(Relation, Relation)> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let direct = match (&boxes[a], &boxes[b]) {
                (Some(ba), Some(bb)) if boxes_apart(ba, bb) => Relation::Disjoint,
                _ => triangles_relation(&triangles[a], &triangles[b], system.c()),
            };
            let reduced = reduced_relation(system, &words[a], &words[b], &deltas, &strips);
            (direct, reduced)
        })
        .collect();

    let mut report = VerificationReport::new("disjoint", max_depth);
    report.items_checked = pairs.len() as u64;
    let mut bad = 0usize;
    for (&(a, b), &(direct, reduced)) in pairs.iter().zip(&verdicts) {
        if direct == Relation::Disjoint && reduced == Relation::Disjoint {
            continue;
        }
        bad += 1;
        if bad > MAX_WITNESSES {
            continue;
        }
        // a certified meeting or a disagreement is a failure
        let outcome = if direct == Relation::Unknown && reduced == Relation::Unknown {
            Outcome::Inconclusive
        } else {
            Outcome::Fail
        };
        report.record_failure(
            outcome,
            format!(
                "pair={} {} direct={direct:?} reduced={reduced:?}",
                words[a], words[b]
            ),
        );
    }
    report.precision_digits = system.c().max_precision_used();
    report.add_detail("triangles", words.len());
    report.add_detail("with_delta", words.len() - 1);
    report.add_detail("failing_pairs", bad);
    Ok(report)
}

/// The open set `O_N`: `Δ` and `Δ_w` for I-words with `|w| ≤ N`, and its
/// images under each generator. Distinct images must have disjoint
/// interiors.
pub fn verify_osc(system: &System, max_depth: usize) -> Result<VerificationReport> {
    let words = family_words(max_depth);
    let family: Vec<Triangle> = words
        .iter()
        .map(|w| system.delta_triangle(w))
        .collect::<Result<_>>()?;
    let images: Vec<Vec<Triangle>> = Letter::ALL
        .iter()
        .map(|&l| {
            family
                .iter()
                .map(|t| system.generator(l).apply_triangle(t))
                .collect()
        })
        .collect();

    let boxes: Vec<Vec<_>> = images
        .iter()
        .map(|comps| comps.iter().map(|t| coarse_box(t, system.c())).collect())
        .collect();
    let mut jobs = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            for i in 0..family.len() {
                for j in 0..family.len() {
                    jobs.push((a, b, i, j));
                }
            }
        }
    }
    let verdicts: Vec<InteriorRelation> = jobs
        .par_iter()
        .map(|&(a, b, i, j)| match (&boxes[a][i], &boxes[b][j]) {
            (Some(ba), Some(bb)) if boxes_apart(ba, bb) => InteriorRelation::Disjoint,
            _ => interiors_disjoint(&images[a][i], &images[b][j], system.c()),
        })
        .collect();

    let mut report = VerificationReport::new("osc", max_depth);
    report.items_checked = jobs.len() as u64;
    let mut bad = 0usize;
    for (&(a, b, i, j), verdict) in jobs.iter().zip(&verdicts) {
        if *verdict == InteriorRelation::Disjoint {
            continue;
        }
        bad += 1;
        if bad <= MAX_WITNESSES {
            let outcome = match verdict {
                InteriorRelation::Overlapping => Outcome::Fail,
                _ => Outcome::Inconclusive,
            };
            report.record_failure(
                outcome,
                format!(
                    "images {} {} components {} {} {verdict:?}",
                    Letter::ALL[a].symbol(),
                    Letter::ALL[b].symbol(),
                    words[i],
                    words[j]
                ),
            );
        }
    }

    // Each component of S_a(O_N) must lie in D, and the h-image inside Δ.
    let d = system.d();
    let delta = system.delta();
    let mut containment = 0usize;
    for (a, comps) in images.iter().enumerate() {
        let outer = if Letter::ALL[a] == Letter::H {
            &delta
        } else {
            &d
        };
        for (i, t) in comps.iter().enumerate() {
            containment += 1;
            match triangle_contains(outer, t, system.c()) {
                Some(true) => {}
                other => report.record_failure(
                    if other.is_none() {
                        Outcome::Inconclusive
                    } else {
                        Outcome::Fail
                    },
                    format!(
                        "component {}{} not contained in {}",
                        Letter::ALL[a].symbol(),
                        words[i],
                        if outer == &delta { "Δ" } else { "D" }
                    ),
                ),
            }
        }
    }
    report.items_checked += containment as u64;

    // The first-level hull images overlap only for the pair (1, h).
    let hulls: Vec<Triangle> = Letter::ALL
        .iter()
        .map(|&l| system.cell_hull(&Word::new(vec![l])))
        .collect();
    let mut overlapping = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            match interiors_disjoint(&hulls[a], &hulls[b], system.c()) {
                InteriorRelation::Disjoint => {}
                InteriorRelation::Overlapping => overlapping.push(format!(
                    "{}{}",
                    Letter::ALL[a].symbol(),
                    Letter::ALL[b].symbol()
                )),
                InteriorRelation::Unknown => report.record_failure(
                    Outcome::Inconclusive,
                    format!("hull pair {a} {b} undecided"),
                ),
            }
        }
    }
    let exception = overlapping == ["1h"];
    if !exception {
        report.record_failure(
            Outcome::Fail,
            format!("overlapping first-level hulls: {overlapping:?}"),
        );
    }
    report.precision_digits = system.c().max_precision_used();
    report.add_detail("components", family.len());
    report.add_detail("containment_checks", containment);
    report.add_detail("hull_overlaps", overlapping.join(","));
    Ok(report)
}
