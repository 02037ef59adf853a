//! Situation figures: the cover drawn left- and right-justified against
//! the optimal support octagon of a case.

use std::fmt::Write;

use crate::catalog::CaseSpec;
use crate::geometry::{CoverParams, Point};
use crate::solver::SolveResult;

const SCALE: f64 = 1000.0;
const PAD: f64 = 40.0;

struct Canvas {
    min_x: f64,
    height: f64,
    body: String,
}

impl Canvas {
    fn map(&self, p: Point) -> (f64, f64) {
        (PAD + (p.x - self.min_x) * SCALE, PAD + (self.height - p.y) * SCALE)
    }

    fn polygon(&mut self, pts: &[Point], style: &str) {
        let coords: Vec<String> = pts
            .iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(self.body, r#"<polygon points="{}" {style}/>"#, coords.join(" "));
    }

    fn label(&mut self, p: Point, text: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(self.body, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#);
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="{:.2}" font-size="14" font-family="sans-serif">{text}</text>"#,
            x + 5.0,
            y - 5.0
        );
    }
}

fn shifted(pts: &[Point], dx: f64) -> Vec<Point> {
    pts.iter().map(|&p| Point::new(p.x + dx, p.y)).collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// The cover alone.
pub fn cover_svg(params: &CoverParams) -> String {
    let hex = params.hexagon();
    let mut c = Canvas { min_x: 0.0, height: params.w, body: String::new() };
    c.polygon(&hex.vertices, r##"fill="#dde8f5" stroke="black" stroke-width="2""##);
    finish(c, params.l, params.w, &format!("area {:.7}", params.area()))
}

/// The cover placed with its left wall on p8 (solid) and its right wall on
/// p4 (dashed), and the optimal octagon of the case.
pub fn case_svg(params: &CoverParams, case: &CaseSpec, result: &SolveResult) -> String {
    let hex = params.hexagon();
    let pts = result.primal_point.points;
    let (x8, x4) = (pts[7].x, pts[3].x);
    let min_x = x8.min(x4 - params.l).min(pts.iter().map(|p| p.x).fold(f64::INFINITY, f64::min));
    let max_x = (x8 + params.l).max(x4).max(pts.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max));
    let mut c = Canvas { min_x, height: params.w, body: String::new() };
    c.polygon(&shifted(&hex.vertices, x8), r##"fill="#dde8f5" fill-opacity="0.6" stroke="black" stroke-width="2""##);
    c.polygon(
        &shifted(&hex.vertices, x4 - params.l),
        r##"fill="none" stroke="#555" stroke-width="1.5" stroke-dasharray="6,4""##,
    );
    c.polygon(&pts, r##"fill="none" stroke="#c0392b" stroke-width="2""##);
    for (k, &p) in pts.iter().enumerate() {
        c.label(p, &format!("p{}", k + 1));
    }
    let caption = format!(
        "{}: {}  length {:.7}",
        case.name,
        case.predicates.join(", "),
        result.primal_value
    );
    finish(c, max_x - min_x, params.w, &caption)
}

fn finish(c: Canvas, width: f64, height: f64, caption: &str) -> String {
    let w = width * SCALE + 2.0 * PAD;
    let h = height * SCALE + 3.0 * PAD;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
    );
    out.push_str(&c.body);
    let _ = writeln!(
        out,
        r#"<text x="{PAD}" y="{:.2}" font-size="16" font-family="sans-serif">{}</text>"#,
        h - PAD / 2.0,
        escape(caption)
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::find_case;
    use crate::solver::{minimize_chain_length, SolveOptions};

    #[test]
    fn case_figure_is_well_formed() {
        let p = CoverParams::canonical();
        let case = find_case(&p, "2.2d").unwrap();
        let r = minimize_chain_length(&case.constraints, &SolveOptions::default()).unwrap();
        let svg = case_svg(&p, &case, &r);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polygon").count(), 3);
        assert!(svg.contains(">p8<"));
    }

    #[test]
    fn cover_figure_mentions_area() {
        assert!(cover_svg(&CoverParams::canonical()).contains("area 0.1102299"));
    }
}
