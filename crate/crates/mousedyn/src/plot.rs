//! Dependency-free SVG rendering of ROC curves.

use std::fmt::Write as _;

use crate::eval::{EvalReport, RocPoint, UserEval};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn plot_x(fpr: f64) -> f64 {
    MARGIN_LEFT + fpr * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
}

fn plot_y(tpr: f64) -> f64 {
    HEIGHT - MARGIN_BOTTOM - tpr * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
}

fn polyline(points: &[RocPoint]) -> String {
    let mut coords = String::new();
    for p in points {
        let _ = write!(coords, "{:.2},{:.2} ", plot_x(p.fpr), plot_y(p.tpr));
    }
    coords.trim_end().to_string()
}

fn frame(title: &str) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{title}</text>"#,
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0
    );

    // axes with 0.2 ticks
    for i in 0..=5 {
        let v = i as f64 * 0.2;
        let x = plot_x(v);
        let y = plot_y(v);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="#cccccc" stroke-width="1"/>"##,
            plot_y(0.0),
            plot_y(1.0)
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#cccccc" stroke-width="1"/>"##,
            plot_x(0.0),
            plot_x(1.0)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{v:.1}</text>"#,
            plot_y(0.0) + 18.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{v:.1}</text>"#,
            plot_x(0.0) - 8.0,
            y + 4.0
        );
    }

    // reference diagonal
    let _ = writeln!(
        svg,
        r##"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#999999" stroke-width="1" stroke-dasharray="6,4"/>"##,
        plot_x(0.0),
        plot_y(0.0),
        plot_x(1.0),
        plot_y(1.0)
    );

    // axis labels
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">False Positive Rate</text>"#,
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.1})">True Positive Rate</text>"#,
        (plot_y(0.0) + plot_y(1.0)) / 2.0,
        (plot_y(0.0) + plot_y(1.0)) / 2.0
    );
    svg
}

fn auc_label(row: &UserEval) -> String {
    row.auc
        .map(|a| format!("AUC {a:.3}"))
        .unwrap_or_else(|| "AUC n/a".into())
}

/// All users' curves in one chart with a legend.
pub fn roc_svg_overlay(report: &EvalReport, title: &str) -> Option<String> {
    let rows: Vec<&UserEval> = report.rows.iter().filter(|r| r.roc.is_some()).collect();
    if rows.is_empty() {
        return None;
    }
    let mut svg = frame(title);
    for (i, row) in rows.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            polyline(row.roc.as_ref().unwrap())
        );
        let ly = MARGIN_TOP + 14.0 + i as f64 * 16.0;
        let lx = WIDTH - MARGIN_RIGHT + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="2"/>"#,
            ly - 4.0,
            lx + 18.0,
            ly - 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{ly:.1}" font-family="sans-serif" font-size="11">{} ({})</text>"#,
            lx + 24.0,
            row.user_id,
            auc_label(row)
        );
    }
    svg.push_str("</svg>\n");
    Some(svg)
}

/// One user's curve with an AUC annotation.
pub fn roc_svg_single(row: &UserEval, title: &str) -> Option<String> {
    let points = row.roc.as_ref()?;
    let mut svg = frame(title);
    let _ = writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.8"/>"#,
        polyline(points),
        PALETTE[0]
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="14">{}</text>"#,
        plot_x(0.55),
        plot_y(0.12),
        auc_label(row)
    );
    svg.push_str("</svg>\n");
    Some(svg)
}
