//! Minimal SVG plot writer: fixed 800x800 viewport, auto-scaled axes with a
//! 5% margin, one closed boundary path per range, fixed 8-color cycle, and an
//! origin crosshair.

use num_complex::Complex64;

const SIZE: f64 = 800.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

pub struct RangePlot {
    pub label: String,
    pub hull: Vec<Complex64>,
    pub cloud: Vec<Complex64>,
}

fn bounds(plots: &[RangePlot]) -> (f64, f64, f64, f64) {
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for p in plots {
        for z in p.hull.iter().chain(&p.cloud) {
            x0 = x0.min(z.re);
            x1 = x1.max(z.re);
            y0 = y0.min(z.im);
            y1 = y1.max(z.im);
        }
    }
    if x1 - x0 < 1e-9 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 < 1e-9 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    (x0, x1, y0, y1)
}

pub fn render(plots: &[RangePlot]) -> String {
    let (x0, x1, y0, y1) = bounds(plots);
    let span = (x1 - x0).max(y1 - y0);
    let margin = 0.05 * span;
    let cx = 0.5 * (x0 + x1);
    let cy = 0.5 * (y0 + y1);
    let half = 0.5 * span + margin;
    let scale = SIZE / (2.0 * half);
    let px = |z: Complex64| -> (f64, f64) {
        ((z.re - cx + half) * scale, SIZE - (z.im - cy + half) * scale)
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" \
         viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Axes through the origin, with the origin crosshair.
    let (ox, oy) = px(Complex64::new(0.0, 0.0));
    out.push_str(&format!(
        "<line x1=\"0\" y1=\"{oy}\" x2=\"{SIZE}\" y2=\"{oy}\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n"
    ));
    out.push_str(&format!(
        "<line x1=\"{ox}\" y1=\"0\" x2=\"{ox}\" y2=\"{SIZE}\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n"
    ));
    out.push_str(&format!(
        "<g stroke=\"#333333\" stroke-width=\"2\">\
         <line x1=\"{}\" y1=\"{oy}\" x2=\"{}\" y2=\"{oy}\"/>\
         <line x1=\"{ox}\" y1=\"{}\" x2=\"{ox}\" y2=\"{}\"/></g>\n",
        ox - 8.0,
        ox + 8.0,
        oy - 8.0,
        oy + 8.0
    ));

    for (i, plot) in plots.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        if !plot.hull.is_empty() {
            let mut d = String::new();
            for (k, &z) in plot.hull.iter().enumerate() {
                let (x, y) = px(z);
                d.push_str(&format!("{}{x:.3} {y:.3} ", if k == 0 { "M" } else { "L" }));
            }
            d.push('Z');
            out.push_str(&format!(
                "<path d=\"{d}\" fill=\"{color}\" fill-opacity=\"0.08\" stroke=\"{color}\" \
                 stroke-width=\"1.5\"/>\n"
            ));
        }
        for &z in &plot.cloud {
            let (x, y) = px(z);
            out.push_str(&format!(
                "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"1.2\" fill=\"{color}\" \
                 fill-opacity=\"0.5\"/>\n"
            ));
        }
        out.push_str(&format!(
            "<text x=\"12\" y=\"{}\" font-family=\"monospace\" font-size=\"14\" \
             fill=\"{color}\">{}</text>\n",
            20 + 18 * i,
            plot.label
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_paths_and_crosshair() {
        let plots = vec![RangePlot {
            label: "q=0.5".into(),
            hull: vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(-1.0, 0.0),
            ],
            cloud: vec![Complex64::new(0.2, 0.1)],
        }];
        let svg = render(&plots);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(svg.contains("circle"));
        assert!(svg.contains("stroke-width=\"2\""), "origin crosshair present");
    }
}
