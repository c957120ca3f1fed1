//! Three operations for the browser page in `www/`.
//!
//! Each has a plain Rust form returning `Result<String, String>` so it can
//! be tested natively, and a thin `#[wasm_bindgen]` wrapper.

use std::sync::Arc;

use wasm_bindgen::prelude::*;

use dendrite_core::rational::{format_rational, frac, to_f64};
use dendrite_core::render::{render_scene, Overlay, SceneSpec};
use dendrite_core::separation::margin;
use dendrite_core::ternary::digits_to_string;
use dendrite_core::{CSource, DigitStream, Rational, System, Word};

/// Depth limits keep a page interaction under a second or so.
pub const MAX_DEPTH: usize = 7;
pub const MAX_TABLE_DEPTH: usize = 6;
pub const MAX_DIGITS: usize = 100_000;

fn system(h_num: i64, h_den: i64) -> Result<System, String> {
    if h_den <= 0 {
        return Err("denominator must be positive".into());
    }
    let h: Rational = frac(h_num, h_den);
    let source = CSource::new(DigitStream::canonical(), 128, 8192).map_err(|e| e.to_string())?;
    let sys = System::new(h, Arc::new(source)).map_err(|e| e.to_string())?;
    sys.base_triangle().map_err(|e| e.to_string())?;
    Ok(sys)
}

/// SVG of the depth-`depth` cells; `overlays` is a comma-separated list
/// such as `"D,delta,labels"`.
pub fn scene(depth: usize, h_num: i64, h_den: i64, overlays: &str) -> Result<String, String> {
    if depth > MAX_DEPTH {
        return Err(format!("depth is capped at {MAX_DEPTH} in the browser"));
    }
    let overlays = overlays
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Overlay>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let sys = system(h_num, h_den)?;
    let spec = SceneSpec {
        width: 800.0,
        ..SceneSpec::new(depth).with_overlays(&overlays)
    };
    render_scene(&sys, &spec).map_err(|e| e.to_string())
}

/// The `rows` tightest separation margins among I-words up to `depth`, as
/// tab-separated lines under a header. The last line is a summary.
pub fn margin_table(depth: usize, h_num: i64, h_den: i64, rows: usize) -> Result<String, String> {
    if !(1..=MAX_TABLE_DEPTH).contains(&depth) {
        return Err(format!("depth must be between 1 and {MAX_TABLE_DEPTH}"));
    }
    let sys = system(h_num, h_den)?;
    let mut records = Word::i_words_up_to(depth)
        .iter()
        .map(|w| margin(&sys, w).map_err(|e| format!("{w}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    records.sort_by(|a, b| a.margin().cmp(&b.margin()).then(a.word.cmp(&b.word)));
    let failing = records.iter().filter(|r| !r.pass).count();
    let mut out = String::from("word\tside\tcase\tgap\trequired\tresult\n");
    for r in records.iter().take(rows) {
        out.push_str(&format!(
            "{}\t{}\t{}\t{:.6}\t{}\t{}\n",
            r.word,
            r.side,
            r.case,
            to_f64(r.scaled_gap.lo()),
            format_rational(&r.required),
            if r.pass { "pass" } else { "fail" }
        ));
    }
    out.push_str(&format!("{} words, {failing} failing", records.len()));
    Ok(out)
}

/// First `count` base-3 digits of `c`.
pub fn digits(count: usize) -> Result<String, String> {
    if !(1..=MAX_DIGITS).contains(&count) {
        return Err(format!("count must be between 1 and {MAX_DIGITS}"));
    }
    DigitStream::canonical()
        .c_digits(count)
        .map(|d| digits_to_string(&d))
        .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn render_svg(depth: usize, h_num: i32, h_den: i32, overlays: &str) -> Result<String, JsError> {
    scene(depth, h_num.into(), h_den.into(), overlays).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn separation_margins(
    depth: usize,
    h_num: i32,
    h_den: i32,
    rows: usize,
) -> Result<String, JsError> {
    margin_table(depth, h_num.into(), h_den.into(), rows).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn c_digits(count: usize) -> Result<String, JsError> {
    digits(count).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scene_has_one_polygon_per_cell() {
        let svg = scene(2, 2, 9, "D, labels").unwrap();
        assert_eq!(svg.matches(r#"class="cell""#).count(), 16);
        assert!(svg.contains("overlay-base"));
        assert!(scene(2, 2, 9, "circle").is_err());
        assert!(scene(MAX_DEPTH + 1, 2, 9, "").is_err());
        assert!(scene(1, 3, 5, "").is_err());
    }

    #[test]
    fn table_is_sorted_by_margin() {
        let t = margin_table(3, 2, 9, 3).unwrap();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("1\tabove\t2c\t"));
        assert_eq!(lines[4], "39 words, 0 failing");
    }

    #[test]
    fn one_third_shows_failures() {
        let t = margin_table(3, 1, 3, 2).unwrap();
        assert!(t.ends_with("39 words, 2 failing"));
        assert!(t.lines().nth(1).unwrap().ends_with("\tfail"));
    }

    #[test]
    fn digit_prefix() {
        assert_eq!(digits(6).unwrap(), "110200");
        assert!(digits(0).is_err());
        assert!(margin_table(2, 2, 0, 1).is_err());
    }
}
