//! CSV and SVG writers. Output is byte-stable for identical input.

use std::fmt::Write as _;
use std::io::{self, Write};

use super::SweepRow;

pub const CSV_HEADER: &str =
    "scenario,mixture,p,tau_plus,concurrence,discord,mutual_information,classical_correlations,purity";

/// `printf("%.12g")`: 12 significant digits, trailing zeros dropped.
pub fn format_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-4..12).contains(&exp) {
        trim(format!("{x:.*}", (11 - exp) as usize))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in rows {
        let numbers = [
            r.p,
            r.tau_plus,
            r.concurrence,
            r.discord,
            r.mutual_information,
            r.classical_correlations,
            r.purity,
        ]
        .map(format_g12);
        w.write_record(
            [r.scenario.as_str(), r.mixture.as_str()]
                .into_iter()
                .chain(numbers.iter().map(String::as_str)),
        )?;
    }
    w.flush()
}

const PANEL_W: f64 = 300.0;
const PANEL_H: f64 = 180.0;
const MARGIN: f64 = 40.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn polyline(out: &mut String, x0: f64, y0: f64, tau_max: f64, tau: &[f64], v: &[f64], color: &str) {
    let sx = if tau_max > 0.0 {
        PANEL_W / tau_max
    } else {
        0.0
    };
    let points: Vec<String> = tau
        .iter()
        .zip(v)
        .map(|(t, y)| format!("{:.2},{:.2}", x0 + t * sx, y0 + PANEL_H * (1.0 - y)))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{color}" stroke-width="1" points="{}"/>"#,
        points.join(" ")
    );
}

/// One line-plot panel: `(p, tau+, concurrence, discord)`.
pub type Panel = (f64, Vec<f64>, Vec<f64>, Vec<f64>);

/// Grid of panels, three per row, each with concurrence (red) and discord
/// (blue) against `tau+` on a `[0, 1]` vertical axis.
pub fn line_panels_svg(title: &str, tau_max: f64, panels: &[Panel]) -> String {
    let cols = panels.len().clamp(1, 3);
    let rows = panels.len().div_ceil(3).max(1);
    let width = cols as f64 * (PANEL_W + MARGIN) + MARGIN;
    let height = rows as f64 * (PANEL_H + MARGIN) + 2.0 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<text x="{MARGIN}" y="20">{}</text>"#, escape(title));
    for (k, (p, tau, c, d)) in panels.iter().enumerate() {
        let x0 = MARGIN + (k % 3) as f64 * (PANEL_W + MARGIN);
        let y0 = 2.0 * MARGIN + (k / 3) as f64 * (PANEL_H + MARGIN) - MARGIN / 2.0;
        let _ = writeln!(
            out,
            r#"<rect x="{x0}" y="{y0}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">p = {}</text>"#,
            x0 + 4.0,
            y0 + 12.0,
            format_g12(*p)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">tau+ 0..{}</text>"#,
            x0,
            y0 + PANEL_H + 14.0,
            format_g12(tau_max)
        );
        polyline(&mut out, x0, y0, tau_max, tau, c, "red");
        polyline(&mut out, x0, y0, tau_max, tau, d, "blue");
    }
    out.push_str("</svg>\n");
    out
}

/// Linear dark-blue to yellow ramp on `[0, 1]`.
fn color(v: f64) -> String {
    let v = v.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * v).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(20.0, 250.0),
        lerp(30.0, 230.0),
        lerp(110.0, 40.0)
    )
}

/// Heat map of `grid[p_index][tau_index]`, `tau+` horizontal, `p` vertical
/// increasing upwards.
pub fn heat_map_svg(title: &str, tau_max: f64, p_axis: &[f64], grid: &[Vec<f64>]) -> String {
    let n_p = grid.len().max(1);
    let n_t = grid.first().map_or(1, |r| r.len().max(1));
    let (w, h) = (2.0 * PANEL_W, 2.0 * PANEL_H);
    let (cw, ch) = (w / n_t as f64, h / n_p as f64);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="11">"#,
        w + 2.0 * MARGIN,
        h + 3.0 * MARGIN
    );
    let _ = writeln!(out, r#"<text x="{MARGIN}" y="20">{}</text>"#, escape(title));
    let _ = writeln!(out, r#"<g shape-rendering="crispEdges">"#);
    for (i, row) in grid.iter().enumerate() {
        let y = MARGIN + h - (i + 1) as f64 * ch;
        for (j, &v) in row.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                MARGIN + j as f64 * cw,
                y,
                cw + 0.05,
                ch + 0.05,
                color(v)
            );
        }
    }
    out.push_str("</g>\n");
    let (p_lo, p_hi) = (
        p_axis.first().copied().unwrap_or(0.0),
        p_axis.last().copied().unwrap_or(1.0),
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}">tau+ 0..{}, p {}..{} (bottom to top), 0 dark, 1 bright</text>"#,
        MARGIN + h + 16.0,
        format_g12(tau_max),
        format_g12(p_lo),
        format_g12(p_hi)
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12_formatting() {
        assert_eq!(format_g12(0.0), "0");
        assert_eq!(format_g12(-0.0), "0");
        assert_eq!(format_g12(1.0), "1");
        assert_eq!(format_g12(0.1), "0.1");
        assert_eq!(format_g12(10.0), "10");
        assert_eq!(format_g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_g12(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_g12(123456.789), "123456.789");
        assert_eq!(format_g12(1e-7), "1e-7");
        assert_eq!(format_g12(1.5e-5), "1.5e-5");
        assert_eq!(format_g12(0.000123), "0.000123");
        assert_eq!(format_g12(1e15), "1e15");
        assert_eq!(format_g12(-0.25), "-0.25");
        // rounding that bumps the exponent
        assert_eq!(format_g12(9.9999999999999e-6), "1e-5");
    }

    #[test]
    fn csv_layout() {
        let row = SweepRow {
            scenario: "const0-const0".into(),
            mixture: "phi+psi+".into(),
            p: 0.5,
            tau_plus: 0.0,
            concurrence: 0.0,
            discord: 0.25,
            mutual_information: 1.0,
            classical_correlations: 0.75,
            purity: 0.5,
        };
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            format!("{CSV_HEADER}\nconst0-const0,phi+psi+,0.5,0,0,0.25,1,0.75,0.5\n")
        );
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let s = line_panels_svg(
            "t <1>",
            1.0,
            &[(0.5, vec![0.0, 1.0], vec![1.0, 0.0], vec![0.5, 0.5])],
        );
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(s.contains("t &lt;1&gt;"));
        let h = heat_map_svg("h", 1.0, &[0.0, 1.0], &[vec![0.0, 1.0], vec![0.5, 0.5]]);
        assert_eq!(h.matches("<rect").count(), 4);
    }
}
