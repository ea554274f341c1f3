//! SVG scatter plots of dataset points in signed-log absolute invariants.

use std::fmt::Write;

use g2ml_core::dataset::{ClassScheme, Dataset};
use g2ml_core::wproj::ln_biguint;
use g2ml_core::Rational;
use num_traits::{Signed, ToPrimitive, Zero};

const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#7f7f7f"];
const PANEL: f64 = 300.0;
const PAD: f64 = 40.0;

/// `sign(x) * ln(1 + |x|)`, accurate for rationals far outside the f64 range.
pub fn signed_log(x: &Rational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let ln_abs = ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude());
    let v = if ln_abs > 36.0 { ln_abs } else { x.abs().to_f64().unwrap_or(f64::MAX).ln_1p() };
    if x.is_negative() {
        -v
    } else {
        v
    }
}

pub struct PlotPoint {
    pub s: [f64; 3],
    /// Class index, or `None` for undecided records.
    pub class: Option<usize>,
}

pub fn plot_points(d: &Dataset, scheme: ClassScheme) -> Vec<PlotPoint> {
    d.records().map(|r| PlotPoint { s: r.key.as_array().map(signed_log), class: scheme.class_of(r) }).collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace("--", "- -")
}

/// Three panels `(s1, s2)`, `(s1, s3)`, `(s2, s3)` with a legend. `note`
/// goes into a leading comment.
pub fn render_svg(points: &[PlotPoint], names: &[&str], note: &str) -> String {
    let width = 3.0 * (PANEL + PAD) + PAD;
    let height = PANEL + 2.0 * PAD + 20.0 * (names.len() + 1) as f64;
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in points {
        for i in 0..3 {
            lo[i] = lo[i].min(p.s[i]);
            hi[i] = hi[i].max(p.s[i]);
        }
    }
    for i in 0..3 {
        if hi[i].partial_cmp(&lo[i]) != Some(std::cmp::Ordering::Greater) {
            lo[i] = if lo[i].is_finite() { lo[i] - 1.0 } else { -1.0 };
            hi[i] = lo[i] + 2.0;
        }
    }
    let scale = |v: f64, i: usize| (v - lo[i]) / (hi[i] - lo[i]) * PANEL;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, "<!-- {} -->", escape(note));
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (panel, (a, b)) in [(0usize, 1usize), (0, 2), (1, 2)].into_iter().enumerate() {
        let x0 = PAD + panel as f64 * (PANEL + PAD);
        let _ = writeln!(s, r#"<g transform="translate({x0},{PAD})">"#);
        let _ = writeln!(s, r#"<rect width="{PANEL}" height="{PANEL}" fill="none" stroke="black"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">s(t{}) vs s(t{})</text>"#,
            PANEL / 2.0,
            -8.0,
            b + 1,
            a + 1
        );
        for p in points {
            let color = p.class.map_or(PALETTE[4], |c| PALETTE[c % 4]);
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="{color}"/>"#,
                scale(p.s[a], a),
                PANEL - scale(p.s[b], b)
            );
        }
        let _ = writeln!(s, "</g>");
    }
    let ly = PAD + PANEL + 25.0;
    let legend = names.iter().map(|n| n.to_string()).chain(["undecided".to_string()]);
    for (i, name) in legend.enumerate() {
        let color = if i < names.len() { PALETTE[i % 4] } else { PALETTE[4] };
        let y = ly + 20.0 * i as f64;
        let _ = writeln!(s, r#"<circle cx="{PAD}" cy="{y}" r="4" fill="{color}"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12">{}</text>"#, PAD + 10.0, y + 4.0, escape(&name));
    }
    let _ = writeln!(s, "</svg>");
    s
}
