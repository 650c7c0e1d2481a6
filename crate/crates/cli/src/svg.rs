//! Static SVG scatter plot of `φ_χ(p)/p`.

use std::fmt::Write;

use pascalchar::{Parity, ScatterPoint};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 540.0;
const MARGIN: f64 = 40.0;

/// Default view `[-1, 6] × [-3, 3]`, widened to include every point.
pub fn view_box(points: &[ScatterPoint]) -> (f64, f64, f64, f64) {
    points
        .iter()
        .fold((-1.0, 6.0, -3.0, 3.0), |(x0, x1, y0, y1), s| {
            (
                x0.min(s.z.re.floor()),
                x1.max(s.z.re.ceil()),
                y0.min(s.z.im.floor()),
                y1.max(s.z.im.ceil()),
            )
        })
}

pub fn scatter_svg(points: &[ScatterPoint]) -> String {
    let (x0, x1, y0, y1) = view_box(points);
    let sx = (WIDTH - 2.0 * MARGIN) / (x1 - x0);
    let sy = (HEIGHT - 2.0 * MARGIN) / (y1 - y0);
    let px = |x: f64| MARGIN + (x - x0) * sx;
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) * sy;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<g stroke="black" stroke-width="1"><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/></g>"#,
        px(x0),
        py(0.0),
        px(x1),
        py(0.0),
        px(0.0),
        py(y0),
        px(0.0),
        py(y1)
    );
    let _ = writeln!(
        s,
        r#"<g font-family="sans-serif" font-size="11" fill="black">"#
    );
    for x in (x0 as i64)..=(x1 as i64) {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x}</text>"#,
            px(x as f64),
            py(0.0) + 14.0
        );
    }
    for y in (y0 as i64)..=(y1 as i64) {
        if y != 0 {
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{y}</text>"#,
                px(0.0) - 4.0,
                py(y as f64) + 4.0
            );
        }
    }
    let _ = writeln!(s, "</g>");
    for p in points {
        let color = match p.parity {
            Parity::Odd => "red",
            Parity::Even => "blue",
        };
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="1.8" fill="{color}"><title>p={} k={}</title></circle>"#,
            px(p.z.re),
            py(p.z.im),
            p.p,
            p.k
        );
    }
    s.push_str("</svg>\n");
    s
}
