//! Minimal self-contained SVG line charts (no dependencies). Good enough
//! for eyeballing miss-rate curves; anything fancier should consume the
//! CSV output instead.

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
}

pub struct ChartOptions {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
}

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;

pub const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

fn transform(v: f64, log: bool) -> f64 {
    if log {
        v.max(f64::MIN_POSITIVE).log10()
    } else {
        v
    }
}

/// Render series as polylines. Non-positive values are dropped on log axes.
pub fn line_chart(series: &[Series], opts: &ChartOptions) -> String {
    let usable: Vec<(usize, Vec<(f64, f64)>)> = series
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let pts = s
                .points
                .iter()
                .filter(|&&(x, y)| (!opts.log_x || x > 0.0) && (!opts.log_y || y > 0.0))
                .map(|&(x, y)| (transform(x, opts.log_x), transform(y, opts.log_y)))
                .collect();
            (i, pts)
        })
        .collect();

    let all: Vec<(f64, f64)> = usable.iter().flat_map(|(_, p)| p.iter().copied()).collect();
    let (mut x0, mut x1) = all
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, _)| {
            (lo.min(x), hi.max(x))
        });
    let (mut y0, mut y1) = all
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, y)| {
            (lo.min(y), hi.max(y))
        });
    if !x0.is_finite() {
        (x0, x1) = (0.0, 1.0);
        (y0, y1) = (0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }

    let px = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * (WIDTH - MARGIN_L - MARGIN_R);
    let py = |y: f64| HEIGHT - MARGIN_B - (y - y0) / (y1 - y0) * (HEIGHT - MARGIN_T - MARGIN_B);

    let mut out = String::with_capacity(8192);
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    out.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        WIDTH / 2.0,
        escape(&opts.title)
    ));

    // axes, ticks and gridlines (decades on log axes, 5 even ticks otherwise)
    let ticks = |lo: f64, hi: f64, log: bool| -> Vec<f64> {
        if log {
            let lo_d = lo.floor() as i64;
            let hi_d = hi.ceil() as i64;
            (lo_d..=hi_d).map(|d| d as f64).collect()
        } else {
            (0..=5).map(|i| lo + (hi - lo) * i as f64 / 5.0).collect()
        }
    };
    for t in ticks(x0, x1, opts.log_x) {
        if t < x0 - 1e-9 || t > x1 + 1e-9 {
            continue;
        }
        let x = px(t);
        out.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{}\" x2=\"{x:.1}\" y2=\"{}\" stroke=\"#ddd\"/>\n",
            py(y1),
            py(y0)
        ));
        let label = if opts.log_x {
            format!("1e{t:.0}")
        } else {
            format!("{t:.3}")
        };
        out.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{}\" text-anchor=\"middle\">{label}</text>\n",
            HEIGHT - MARGIN_B + 18.0
        ));
    }
    for t in ticks(y0, y1, opts.log_y) {
        if t < y0 - 1e-9 || t > y1 + 1e-9 {
            continue;
        }
        let y = py(t);
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y:.1}\" x2=\"{}\" y2=\"{y:.1}\" stroke=\"#ddd\"/>\n",
            px(x0),
            px(x1)
        ));
        let label = if opts.log_y {
            format!("1e{t:.0}")
        } else {
            format!("{t:.3}")
        };
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\">{label}</text>\n",
            MARGIN_L - 6.0,
            y + 4.0
        ));
    }
    out.push_str(&format!(
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n",
        WIDTH - MARGIN_L - MARGIN_R,
        HEIGHT - MARGIN_T - MARGIN_B
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 12.0,
        escape(&opts.x_label)
    ));
    out.push_str(&format!(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        escape(&opts.y_label)
    ));

    for (idx, pts) in &usable {
        if pts.is_empty() {
            continue;
        }
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.6\"/>\n",
            path.join(" "),
            series[*idx].color
        ));
        let ly = MARGIN_T + 16.0 * (*idx as f64 + 1.0);
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{ly:.1}\" x2=\"{}\" y2=\"{ly:.1}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            WIDTH - MARGIN_R - 150.0,
            WIDTH - MARGIN_R - 120.0,
            series[*idx].color
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{:.1}\">{}</text>\n",
            WIDTH - MARGIN_R - 112.0,
            ly + 4.0,
            escape(&series[*idx].label)
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
