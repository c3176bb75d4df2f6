//! Self-contained SVG line charts: one polyline per series, optional
//! per-day background bands, axes with ticks, and a legend. No external
//! renderer; output is deterministic for identical inputs.

use std::fmt::Write as _;

use epictrl_core::{Restriction, Trajectory};

pub const COMPARTMENT_COLORS: [(&str, &str); 5] = [
    ("S", "#1f77b4"),
    ("E", "#ff7f0e"),
    ("I", "#2ca02c"),
    ("R", "#d62728"),
    ("D", "#9467bd"),
];
pub const ECONOMY_COLOR: &str = "#8c564b";

/// Background band fills by restriction code, lightest for the loosest.
pub const ACTION_BAND_COLORS: [&str; 4] = ["#dbe9f6", "#d6efd6", "#fde9a9", "#f5c6c6"];

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;

pub struct Series {
    pub label: String,
    pub color: String,
    pub points: Vec<(f64, f64)>,
}

/// One shaded x-interval behind the plot.
pub struct Band {
    pub from: f64,
    pub to: f64,
    pub color: &'static str,
}

pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub bands: Vec<Band>,
    /// Extra legend entries for band colors: (label, color).
    pub band_legend: Vec<(String, &'static str)>,
}

impl Chart {
    pub fn render(&self) -> String {
        let (x_min, x_max) = span(self.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
        let (mut y_min, mut y_max) =
            span(self.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
        // Anchor the y axis at zero when the data allows it.
        if y_min > 0.0 {
            y_min = 0.0;
        }
        if y_max < 0.0 {
            y_max = 0.0;
        }
        if y_max == y_min {
            y_max = y_min + 1.0;
        }
        let x_span = if x_max == x_min { 1.0 } else { x_max - x_min };
        let y_span = y_max - y_min;
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let sx = |x: f64| MARGIN_LEFT + (x - x_min) / x_span * plot_w;
        let sy = |y: f64| MARGIN_TOP + (1.0 - (y - y_min) / y_span) * plot_h;

        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
             font-family=\"sans-serif\" font-size=\"13\">"
        );
        let _ = writeln!(out, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");

        for band in &self.bands {
            let x0 = sx(band.from.max(x_min));
            let x1 = sx(band.to.min(x_max));
            if x1 <= x0 {
                continue;
            }
            let _ = writeln!(
                out,
                "<rect x=\"{:.2}\" y=\"{MARGIN_TOP}\" width=\"{:.2}\" height=\"{plot_h}\" \
                 fill=\"{}\"/>",
                x0,
                x1 - x0,
                band.color
            );
        }

        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>",
            MARGIN_LEFT + plot_w / 2.0,
            escape(&self.title)
        );

        // Axes with five ticks per side.
        let _ = writeln!(
            out,
            "<line x1=\"{MARGIN_LEFT}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#333\"/>",
            MARGIN_TOP + plot_h,
            MARGIN_LEFT + plot_w,
            MARGIN_TOP + plot_h
        );
        let _ = writeln!(
            out,
            "<line x1=\"{MARGIN_LEFT}\" y1=\"{MARGIN_TOP}\" x2=\"{MARGIN_LEFT}\" y2=\"{:.2}\" \
             stroke=\"#333\"/>",
            MARGIN_TOP + plot_h
        );
        for k in 0..=4 {
            let fx = x_min + x_span * k as f64 / 4.0;
            let px = sx(fx);
            let _ = writeln!(
                out,
                "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#333\"/>",
                MARGIN_TOP + plot_h,
                MARGIN_TOP + plot_h + 5.0
            );
            let _ = writeln!(
                out,
                "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
                MARGIN_TOP + plot_h + 20.0,
                tick_label(fx)
            );
            let fy = y_min + y_span * k as f64 / 4.0;
            let py = sy(fy);
            let _ = writeln!(
                out,
                "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{MARGIN_LEFT}\" y2=\"{py:.2}\" \
                 stroke=\"#333\"/>",
                MARGIN_LEFT - 5.0
            );
            let _ = writeln!(
                out,
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
                MARGIN_LEFT - 9.0,
                py + 4.0,
                tick_label(fy)
            );
        }
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            "<text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">{}</text>",
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            escape(&self.y_label)
        );

        for series in &self.series {
            let mut points = String::new();
            for &(x, y) in &series.points {
                let _ = write!(points, "{:.2},{:.2} ", sx(x), sy(y));
            }
            let _ = writeln!(
                out,
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>",
                series.color,
                points.trim_end()
            );
        }

        let legend_x = WIDTH - MARGIN_RIGHT + 16.0;
        let mut legend_y = MARGIN_TOP + 8.0;
        for series in &self.series {
            let _ = writeln!(
                out,
                "<line x1=\"{legend_x}\" y1=\"{legend_y:.2}\" x2=\"{:.2}\" y2=\"{legend_y:.2}\" \
                 stroke=\"{}\" stroke-width=\"3\"/>",
                legend_x + 22.0,
                series.color
            );
            let _ = writeln!(
                out,
                "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
                legend_x + 28.0,
                legend_y + 4.0,
                escape(&series.label)
            );
            legend_y += 20.0;
        }
        for (label, color) in &self.band_legend {
            let _ = writeln!(
                out,
                "<rect x=\"{legend_x}\" y=\"{:.2}\" width=\"22\" height=\"12\" fill=\"{color}\"/>",
                legend_y - 6.0
            );
            let _ = writeln!(
                out,
                "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
                legend_x + 28.0,
                legend_y + 4.0,
                escape(label)
            );
            legend_y += 20.0;
        }
        out.push_str("</svg>\n");
        out
    }
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for v in values {
        min = min.min(v);
        max = max.max(v);
    }
    if !min.is_finite() || !max.is_finite() {
        (0.0, 1.0)
    } else {
        (min, max)
    }
}

fn tick_label(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e9 {
        format!("{}", v as i64)
    } else {
        format!("{v:.3}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Compartments and the economy over one trajectory; when `with_bands`,
/// each day's restriction shades the background.
pub fn trajectory_chart(title: &str, trajectory: &Trajectory, with_bands: bool) -> String {
    let points = trajectory.points();
    let pick = |f: fn(&epictrl_core::TrajectoryPoint) -> f64| -> Vec<(f64, f64)> {
        points.iter().map(|p| (p.day as f64, f(p))).collect()
    };
    let mut series = vec![
        Series {
            label: "Susceptible".into(),
            color: COMPARTMENT_COLORS[0].1.into(),
            points: pick(|p| p.state.s),
        },
        Series {
            label: "Exposed".into(),
            color: COMPARTMENT_COLORS[1].1.into(),
            points: pick(|p| p.state.e),
        },
        Series {
            label: "Infected".into(),
            color: COMPARTMENT_COLORS[2].1.into(),
            points: pick(|p| p.state.i),
        },
        Series {
            label: "Recovered".into(),
            color: COMPARTMENT_COLORS[3].1.into(),
            points: pick(|p| p.state.r),
        },
        Series {
            label: "Deceased".into(),
            color: COMPARTMENT_COLORS[4].1.into(),
            points: pick(|p| p.state.d),
        },
        Series {
            label: "Economy".into(),
            color: ECONOMY_COLOR.into(),
            points: pick(|p| p.economy),
        },
    ];
    series.retain(|s| !s.points.is_empty());

    let mut bands = Vec::new();
    let mut band_legend = Vec::new();
    if with_bands {
        // Merge consecutive days under the same restriction into one band.
        let mut used = [false; 4];
        let mut start = 0usize;
        for k in 1..=points.len() {
            if k == points.len() || points[k].restriction != points[start].restriction {
                let action = points[start].restriction;
                bands.push(Band {
                    from: points[start].day as f64,
                    to: points[k - 1].day as f64 + 1.0,
                    color: ACTION_BAND_COLORS[action.index()],
                });
                used[action.index()] = true;
                start = k;
            }
        }
        for action in Restriction::ALL {
            if used[action.index()] {
                band_legend.push((action.name().to_string(), ACTION_BAND_COLORS[action.index()]));
            }
        }
    }

    Chart {
        title: title.into(),
        x_label: "day".into(),
        y_label: "persons".into(),
        series,
        bands,
        band_legend,
    }
    .render()
}

/// Per-episode mean reward over a training run.
pub fn training_chart(title: &str, means: &[(u32, f64)]) -> String {
    Chart {
        title: title.into(),
        x_label: "episode".into(),
        y_label: "mean reward".into(),
        series: vec![Series {
            label: "mean reward".into(),
            color: COMPARTMENT_COLORS[0].1.into(),
            points: means.iter().map(|&(e, m)| (e as f64, m)).collect(),
        }],
        bands: Vec::new(),
        band_legend: Vec::new(),
    }
    .render()
}
