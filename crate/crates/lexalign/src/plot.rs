//! CSV export and SVG scatter plots of 2D projections.

use std::fmt::Write as _;
use std::io::Write;

use lexalign_core::{Lang, Projection2D};

use crate::error::{Error, Result};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
/// Labels are drawn only for projections with at most this many points.
pub const MAX_LABELED_POINTS: usize = 100;
pub const SRC_COLOR: &str = "#1f77b4";
pub const TGT_COLOR: &str = "#d62728";

const MARGIN: f64 = 40.0;
const TOP: f64 = 70.0;
const RADIUS: f64 = 3.0;

/// Writes `token,lang,x,y` rows. Coordinates use shortest round-trip form.
pub fn write_csv<W: Write>(projection: &Projection2D, sink: W) -> Result<()> {
    let csv_err = |e: csv::Error| Error::io("writing CSV", e.into());
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["token", "lang", "x", "y"]).map_err(csv_err)?;
    for p in &projection.points {
        w.write_record([p.token.as_str(), p.lang.as_str(), &p.x.to_string(), &p.y.to_string()]).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io("writing CSV", e))
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn color(lang: Lang) -> &'static str {
    match lang {
        Lang::Src => SRC_COLOR,
        Lang::Tgt => TGT_COLOR,
    }
}

/// Maps data coordinates into the plot area with one scale for both axes,
/// so relative spreads of the two languages stay comparable.
struct Frame {
    scale: f64,
    cx: f64,
    cy: f64,
}

impl Frame {
    fn fit(projection: &Projection2D) -> Frame {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in &projection.points {
            x0 = x0.min(p.x);
            x1 = x1.max(p.x);
            y0 = y0.min(p.y);
            y1 = y1.max(p.y);
        }
        if projection.points.is_empty() {
            (x0, x1, y0, y1) = (0.0, 0.0, 0.0, 0.0);
        }
        let avail_w = WIDTH - 2.0 * MARGIN;
        let avail_h = HEIGHT - TOP - MARGIN;
        let sx = if x1 > x0 { avail_w / (x1 - x0) } else { f64::INFINITY };
        let sy = if y1 > y0 { avail_h / (y1 - y0) } else { f64::INFINITY };
        let scale = sx.min(sy);
        let scale = if scale.is_finite() { scale } else { 1.0 };
        Frame { scale, cx: (x0 + x1) / 2.0, cy: (y0 + y1) / 2.0 }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let px = WIDTH / 2.0 + (x - self.cx) * self.scale;
        let py = TOP + (HEIGHT - TOP - MARGIN) / 2.0 - (y - self.cy) * self.scale;
        (px, py)
    }
}

/// Renders a standalone SVG scatter plot: one circle per point, colored by
/// language, with a legend. Token labels are drawn when `labels` is set and
/// the projection has at most [`MAX_LABELED_POINTS`] points.
pub fn render_scatter_svg(projection: &Projection2D, title: &str, labels: bool) -> String {
    let frame = Frame::fit(projection);
    let labels = labels && projection.points.len() <= MAX_LABELED_POINTS;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>",
        WIDTH / 2.0,
        escape(title)
    );
    for (i, (lang, name)) in [(Lang::Src, "source"), (Lang::Tgt, "target")].into_iter().enumerate() {
        let y = 40.0 + 16.0 * i as f64;
        let _ = writeln!(s, "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>", WIDTH - 120.0, y - 9.0, color(lang));
        let _ = writeln!(s, "<text x=\"{}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"12\">{name}</text>", WIDTH - 104.0);
    }
    let _ = writeln!(s, "<g stroke=\"none\">");
    for p in &projection.points {
        let (x, y) = frame.map(p.x, p.y);
        let _ = writeln!(s, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{RADIUS}\" fill=\"{}\"/>", color(p.lang));
    }
    let _ = writeln!(s, "</g>");
    if labels {
        let _ = writeln!(s, "<g font-family=\"sans-serif\" font-size=\"10\">");
        for p in &projection.points {
            let (x, y) = frame.map(p.x, p.y);
            let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"{}\">{}</text>", x + 4.0, y - 4.0, color(p.lang), escape(&p.token));
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}
