//! Minimal static SVG writers: a 2-D scatter with direction lines and a line
//! chart for accuracy curves. Pure string builders, no drawing dependency.

const CLASS_COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn escape_xml(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub struct ScatterPoint {
    pub x: f64,
    pub y: f64,
    pub class: usize,
    pub outlier: bool,
}

/// A labeled line through the origin of the (centered) data frame.
pub struct DirectionLine {
    pub label: String,
    pub direction: (f64, f64),
    pub color: &'static str,
}

/// Scatter plot of centered 2-D data with class colors, ringed outliers and
/// direction lines through the origin.
pub fn scatter_with_directions(points: &[ScatterPoint], lines: &[DirectionLine]) -> String {
    let (width, height) = (640.0, 640.0);
    let margin = 40.0;
    let mut max_abs = 1e-9f64;
    for p in points {
        max_abs = max_abs.max(p.x.abs()).max(p.y.abs());
    }
    max_abs *= 1.05;
    let scale = (width / 2.0 - margin) / max_abs;
    let to_px = |x: f64, y: f64| (width / 2.0 + x * scale, height / 2.0 - y * scale);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // light axes through the data origin
    let (ox, oy) = to_px(0.0, 0.0);
    svg.push_str(&format!(
        "  <line x1=\"0\" y1=\"{oy:.2}\" x2=\"{width}\" y2=\"{oy:.2}\" stroke=\"#dddddd\"/>\n"
    ));
    svg.push_str(&format!(
        "  <line x1=\"{ox:.2}\" y1=\"0\" x2=\"{ox:.2}\" y2=\"{height}\" stroke=\"#dddddd\"/>\n"
    ));

    for p in points {
        let (px, py) = to_px(p.x, p.y);
        let color = CLASS_COLORS[(p.class - 1) % CLASS_COLORS.len()];
        if p.outlier {
            svg.push_str(&format!(
                "  <circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"5\" fill=\"{color}\" \
                 stroke=\"black\" stroke-width=\"1.5\"/>\n"
            ));
        } else {
            svg.push_str(&format!(
                "  <circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"3\" fill=\"{color}\" \
                 fill-opacity=\"0.7\"/>\n"
            ));
        }
    }

    for (k, line) in lines.iter().enumerate() {
        let norm = (line.direction.0.powi(2) + line.direction.1.powi(2)).sqrt();
        let (ux, uy) = (line.direction.0 / norm, line.direction.1 / norm);
        let reach = max_abs;
        let (x1, y1) = to_px(-ux * reach, -uy * reach);
        let (x2, y2) = to_px(ux * reach, uy * reach);
        svg.push_str(&format!(
            "  <line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" \
             stroke=\"{}\" stroke-width=\"2\"/>\n",
            line.color
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" fill=\"{}\" font-size=\"14\">{}</text>\n",
            12.0,
            20.0 + 18.0 * k as f64,
            line.color,
            escape_xml(&line.label)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
}

/// Accuracy-versus-noise curves with a fixed y range of [0, 1].
pub fn line_chart(series: &[Series], x_label: &str, y_label: &str) -> String {
    let (width, height) = (640.0, 480.0);
    let (left, right, top, bottom) = (60.0, 20.0, 20.0, 50.0);
    let mut x_max = 1e-9f64;
    for s in series {
        for &(x, _) in &s.points {
            x_max = x_max.max(x);
        }
    }
    if x_max <= 0.0 {
        x_max = 1.0;
    }
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;
    let to_px = |x: f64, y: f64| (left + x / x_max * plot_w, top + (1.0 - y) * plot_h);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "  <rect x=\"{left}\" y=\"{top}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"#333333\"/>\n"
    ));
    for k in 0..=5 {
        let y = k as f64 / 5.0;
        let (gx, gy) = to_px(0.0, y);
        svg.push_str(&format!(
            "  <line x1=\"{gx:.2}\" y1=\"{gy:.2}\" x2=\"{:.2}\" y2=\"{gy:.2}\" \
             stroke=\"#eeeeee\"/>\n",
            left + plot_w
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{y:.1}</text>\n",
            left - 6.0,
            gy + 4.0
        ));
    }
    // one set of x labels suffices; all series share the noise grid
    if let Some(s) = series.first() {
        for &(x, _) in &s.points {
            let (gx, gy) = to_px(x, 0.0);
            svg.push_str(&format!(
                "  <text x=\"{gx:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{x}</text>\n",
                gy + 18.0
            ));
        }
    }
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        left + plot_w / 2.0,
        height - 12.0,
        escape_xml(x_label)
    ));
    svg.push_str(&format!(
        "  <text x=\"16\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {:.2})\">{}</text>\n",
        top + plot_h / 2.0,
        top + plot_h / 2.0,
        escape_xml(y_label)
    ));

    for (k, s) in series.iter().enumerate() {
        let path: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| {
                let (px, py) = to_px(x, y.clamp(0.0, 1.0));
                format!("{px:.2},{py:.2}")
            })
            .collect();
        svg.push_str(&format!(
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            path.join(" "),
            s.color
        ));
        for &(x, y) in &s.points {
            let (px, py) = to_px(x, y.clamp(0.0, 1.0));
            svg.push_str(&format!(
                "  <circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"3\" fill=\"{}\"/>\n",
                s.color
            ));
        }
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" fill=\"{}\" font-size=\"14\">{}</text>\n",
            left + 10.0,
            top + 20.0 + 18.0 * k as f64,
            s.color,
            escape_xml(&s.label)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn method_color(index: usize) -> &'static str {
    CLASS_COLORS[index % CLASS_COLORS.len()]
}
