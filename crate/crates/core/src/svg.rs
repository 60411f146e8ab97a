//! Standalone SVG box plots of the error distribution, one panel per
//! `(mode, alpha)`, built from `rect`, `line` and `text` elements only.

use std::fmt::Write as _;

use crate::alexiewicz::LeakRate;
use crate::experiments::CellSummary;
use crate::lif::ResetMode;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

fn mode_label(mode: ResetMode) -> &'static str {
    match mode {
        ResetMode::Zero => "reset-to-zero",
        ResetMode::Subtract => "reset-by-subtraction",
        ResetMode::Mod => "reset-to-mod",
    }
}

/// File name used for a panel, e.g. `boxplot_mod_alpha_0.1.svg`.
pub fn panel_file_name(mode: ResetMode, alpha: LeakRate) -> String {
    format!("boxplot_{mode}_alpha_{alpha}.svg")
}

fn tick_step(range: f64) -> f64 {
    let raw = range / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 2.5, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * mag)
}

/// Renders the cells (all of the same mode and alpha, ordered by n) as one
/// box plot with a dashed reference line at `threshold`.
pub fn render_boxplot(cells: &[&CellSummary], threshold: f64) -> String {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let data_max = cells
        .iter()
        .flat_map(|c| {
            c.stats
                .outliers
                .iter()
                .copied()
                .chain([c.stats.whisker_high])
        })
        .fold(0.0_f64, f64::max);
    let y_max = (data_max.max(threshold) * 1.1).max(f64::MIN_POSITIVE);
    let y = |v: f64| TOP + plot_h * (1.0 - v / y_max);
    let slot = plot_w / cells.len().max(1) as f64;
    let half_box = (slot * 0.3).min(30.0);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    if let Some(first) = cells.first() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}, alpha = {}</text>"#,
            WIDTH / 2.0,
            mode_label(first.mode),
            first.alpha
        );
    }

    // axes
    let (x0, x1, y0) = (LEFT, WIDTH - RIGHT, TOP + plot_h);
    let _ = writeln!(
        s,
        r#"<line x1="{x0}" y1="{TOP}" x2="{x0}" y2="{y0}" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#
    );
    let step = tick_step(y_max);
    let mut k = 0;
    while k as f64 * step <= y_max {
        let v = k as f64 * step;
        let yy = y(v);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{yy:.2}" x2="{x0}" y2="{yy:.2}" stroke="black"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            yy + 4.0,
            crate::io::sig12(v)
        );
        k += 1;
    }
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">quantization error</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{}" text-anchor="middle">number of spikes</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );

    for (i, cell) in cells.iter().enumerate() {
        let st = &cell.stats;
        let cx = LEFT + slot * (i as f64 + 0.5);
        let (bl, br) = (cx - half_box, cx + half_box);
        let _ = writeln!(
            s,
            r#"<text x="{cx:.2}" y="{}" text-anchor="middle">{}</text>"#,
            y0 + 18.0,
            cell.n
        );
        // whiskers and caps
        for (from, to) in [(st.whisker_low, st.q1), (st.q3, st.whisker_high)] {
            let _ = writeln!(
                s,
                r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="black"/>"#,
                y(from),
                y(to)
            );
        }
        for w in [st.whisker_low, st.whisker_high] {
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
                cx - half_box / 2.0,
                y(w),
                cx + half_box / 2.0,
                y(w)
            );
        }
        let _ = writeln!(
            s,
            r##"<rect x="{bl:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#9ecae1" stroke="black"/>"##,
            y(st.q3),
            br - bl,
            (y(st.q1) - y(st.q3)).max(0.5)
        );
        let _ = writeln!(
            s,
            r##"<line x1="{bl:.2}" y1="{:.2}" x2="{br:.2}" y2="{:.2}" stroke="#d95f02" stroke-width="2"/>"##,
            y(st.median),
            y(st.median)
        );
        for &o in &st.outliers {
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="4" height="4" fill="none" stroke="black"/>"#,
                cx - 2.0,
                y(o) - 2.0
            );
        }
    }

    let yt = y(threshold);
    let _ = writeln!(
        s,
        r#"<line x1="{x0}" y1="{yt:.2}" x2="{x1}" y2="{yt:.2}" stroke="red" stroke-dasharray="6,4"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{:.2}" text-anchor="end" fill="red">threshold</text>"#,
        x1 - 4.0,
        yt - 4.0
    );
    s.push_str("</svg>\n");
    s
}

/// Splits summaries into `(mode, alpha)` panels, keeping first-seen order.
pub fn panels(cells: &[CellSummary]) -> Vec<(ResetMode, LeakRate, Vec<&CellSummary>)> {
    let mut out: Vec<(ResetMode, LeakRate, Vec<&CellSummary>)> = Vec::new();
    for cell in cells {
        match out
            .iter_mut()
            .find(|(m, a, _)| *m == cell.mode && *a == cell.alpha)
        {
            Some((_, _, group)) => group.push(cell),
            None => out.push((cell.mode, cell.alpha, vec![cell])),
        }
    }
    out
}
