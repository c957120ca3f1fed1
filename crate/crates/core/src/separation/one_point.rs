//! Localization of the first-level intersections.
//!
//! Two first-level pieces that touch should meet in a single point. At
//! depth `n` every pair of hull cells `(a·w, b·v)`, `|w| = |v| = n − 1`,
//! whose closed hulls meet is a witness; the witnesses must all contain one
//! common point and their size must shrink geometrically.

use rayon::prelude::*;

use crate::cform::{CForm, Quadratic};
use crate::error::Result;
use crate::geometry::{
    point_in_triangle, triangles_relation, Letter, Location, Point2, Relation, System, Triangle,
    Word,
};
use crate::interval::RationalInterval;
use crate::rational::{format_rational, frac, Rational};
use crate::report::{Outcome, VerificationReport};

use super::require_depth;

struct Witness {
    cells: [Triangle; 2],
}

struct Level {
    witnesses: Vec<Witness>,
    /// Squared diameter of the largest witness union.
    diameter_sq: Option<RationalInterval>,
}

fn squared_distance(p: &Point2, q: &Point2) -> Quadratic {
    let dx: CForm = &p.x - &q.x;
    let dy: CForm = &p.y - &q.y;
    &(&dx * &dx) + &(&dy * &dy)
}

/// Enclosure of the squared diameter of the union of two triangles.
fn union_diameter_sq(cells: &[Triangle; 2], c: &RationalInterval) -> RationalInterval {
    let pts: Vec<&Point2> = cells.iter().flat_map(|t| t.v.iter()).collect();
    let mut best: Option<RationalInterval> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = squared_distance(pts[i], pts[j]).enclose(c);
            best = Some(match best {
                None => d,
                Some(b) => {
                    RationalInterval::new(b.lo().max(d.lo()).clone(), b.hi().max(d.hi()).clone())
                }
            });
        }
    }
    best.expect("six points")
}

fn max_interval(a: Option<RationalInterval>, b: &RationalInterval) -> RationalInterval {
    match a {
        None => b.clone(),
        Some(a) => RationalInterval::new(a.lo().max(b.lo()).clone(), a.hi().max(b.hi()).clone()),
    }
}

fn contains(p: &Point2, t: &Triangle, system: &System) -> bool {
    matches!(
        point_in_triangle(p, t, system.c()),
        Location::Inside | Location::OnBoundary
    )
}

/// Pairs of first-level pieces whose hulls meet.
pub fn touching_first_level(system: &System) -> Vec<(Letter, Letter)> {
    let mut out = Vec::new();
    for (i, &a) in Letter::ALL.iter().enumerate() {
        for &b in &Letter::ALL[i + 1..] {
            let ta = system.cell_hull(&Word::new(vec![a]));
            let tb = system.cell_hull(&Word::new(vec![b]));
            if triangles_relation(&ta, &tb, system.c()) != Relation::Disjoint {
                out.push((a, b));
            }
        }
    }
    out
}

fn check_family(
    system: &System,
    a: Letter,
    b: Letter,
    max_depth: usize,
    report: &mut VerificationReport,
) -> Result<()> {
    let ci = system.c().interval()?;
    let family = format!("{}{}", a.symbol(), b.symbol());
    let mut candidates = vec![(Word::new(vec![a]), Word::new(vec![b]))];
    let mut levels = Vec::new();
    for depth in 1..=max_depth {
        let verdicts: Vec<(Relation, [Triangle; 2])> = candidates
            .par_iter()
            .map(|(u, v)| {
                let cells = [system.cell_hull(u), system.cell_hull(v)];
                (triangles_relation(&cells[0], &cells[1], system.c()), cells)
            })
            .collect();
        report.items_checked += candidates.len() as u64;
        let mut next = Vec::new();
        let mut level = Level {
            witnesses: Vec::new(),
            diameter_sq: None,
        };
        for ((u, v), (rel, cells)) in candidates.iter().zip(verdicts) {
            match rel {
                Relation::Disjoint => continue,
                Relation::Unknown => report.record_failure(
                    Outcome::Inconclusive,
                    format!("family={family} depth={depth} pair={u} {v} undecided"),
                ),
                Relation::Intersecting => {
                    level.diameter_sq = Some(max_interval(
                        level.diameter_sq.take(),
                        &union_diameter_sq(&cells, &ci),
                    ));
                    level.witnesses.push(Witness { cells });
                }
            }
            if depth < max_depth {
                for &l in &Letter::ALL {
                    for &m in &Letter::ALL {
                        next.push((u.push(l), v.push(m)));
                    }
                }
            }
        }
        if level.witnesses.is_empty() {
            report.record_failure(
                Outcome::Fail,
                format!("family={family} depth={depth} no intersecting pair"),
            );
            return Ok(());
        }
        report.add_detail(
            &format!("witnesses_{family}_{depth}"),
            level.witnesses.len(),
        );
        levels.push(level);
        candidates = next;
    }

    // The shared point: (c, 0) if it qualifies, else a vertex of the
    // deepest witness that lies in every witness hull.
    let deepest = &levels.last().expect("max_depth >= 1").witnesses[0];
    let mut options = vec![Point2::c_on_axis()];
    options.extend(deepest.cells.iter().flat_map(|t| t.v.iter().cloned()));
    let in_all = |p: &Point2| {
        levels
            .iter()
            .flat_map(|l| &l.witnesses)
            .all(|w| contains(p, &w.cells[0], system) && contains(p, &w.cells[1], system))
    };
    match options.iter().find(|p| in_all(p)) {
        Some(p) => report.add_detail(&format!("point_{family}"), p),
        None => report.record_failure(
            Outcome::Fail,
            format!("family={family} witnesses share no common point"),
        ),
    }

    // diam(n+1) ≤ diam(n)/2, i.e. squared diameters shrink by 4.
    for (n, pair) in levels.windows(2).enumerate() {
        let coarse = pair[0].diameter_sq.as_ref().expect("witness present");
        let fine = pair[1].diameter_sq.as_ref().expect("witness present");
        let slack: Rational = coarse.lo() * frac(1, 4) - fine.hi();
        report.note_margin(slack.clone());
        if slack < Rational::from_integer(0.into()) {
            report.record_failure(
                Outcome::Fail,
                format!(
                    "family={family} depth={} squared diameter {} does not shrink from {}",
                    n + 2,
                    format_rational(fine.hi()),
                    format_rational(coarse.lo())
                ),
            );
        }
    }
    Ok(())
}

/// Checks every pair of touching first-level pieces down to `max_depth`.
pub fn verify_one_point(system: &System, max_depth: usize) -> Result<VerificationReport> {
    require_depth(max_depth, 2)?;
    let mut report = VerificationReport::new("onepoint", max_depth);
    let families = touching_first_level(system);
    report.add_detail(
        "families",
        families
            .iter()
            .map(|(a, b)| format!("{}{}", a.symbol(), b.symbol()))
            .collect::<Vec<_>>()
            .join(","),
    );
    for (a, b) in families {
        check_family(system, a, b, max_depth, &mut report)?;
    }
    report.precision_digits = system.c().max_precision_used();
    Ok(report)
}
