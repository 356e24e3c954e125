//! Minimal SVG rendering of experiment CSVs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

fn rows(csv: &str, header: &str) -> Result<Vec<Vec<String>>, String> {
    let mut lines = csv.lines();
    if lines.next() != Some(header) {
        return Err(format!("expected header `{header}`"));
    }
    Ok(lines.map(|l| l.split(',').map(str::to_owned).collect()).collect())
}

fn num(s: &str) -> Result<f64, String> {
    s.parse().map_err(|_| format!("bad number `{s}`"))
}

fn open(title: &str) -> String {
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    let _ = writeln!(s, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = writeln!(s, "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{title}</text>", W / 2.0);
    s
}

fn axis_labels(s: &mut String, x: &str, y: &str) {
    let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{x}</text>", W / 2.0, H - 15.0);
    let _ = writeln!(
        s,
        "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{y}</text>",
        H / 2.0,
        H / 2.0
    );
}

/// Viridis-like ramp from dark blue to yellow.
fn colour(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let r = (68.0 + t * (253.0 - 68.0)) as u8;
    let g = (1.0 + t * (231.0 - 1.0)) as u8;
    let b = (84.0 + t * (37.0 - 84.0)) as u8;
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Heat map of a `d_in_src,d_in_tgt,mean_te,count` grid.
pub fn heatmap_from_csv(csv: &str, title: &str) -> Result<String, String> {
    let cells: Vec<(usize, usize, f64)> = rows(csv, te_motifs::experiments::BA_GRID_HEADER)?
        .iter()
        .map(|r| {
            let s = r[0].parse::<usize>().map_err(|e| e.to_string())?;
            let t = r[1].parse::<usize>().map_err(|e| e.to_string())?;
            Ok((s, t, num(&r[2])?))
        })
        .collect::<Result<_, String>>()?;
    if cells.is_empty() {
        return Err("empty grid".into());
    }
    let max_s = cells.iter().map(|c| c.0).max().unwrap() + 1;
    let max_t = cells.iter().map(|c| c.1).max().unwrap() + 1;
    let lo = cells.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
    let hi = cells.iter().map(|c| c.2).fold(f64::NEG_INFINITY, f64::max);
    let (cw, ch) = ((W - 2.0 * MARGIN) / max_s as f64, (H - 2.0 * MARGIN) / max_t as f64);
    let mut s = open(title);
    for &(src, tgt, v) in &cells {
        let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
        let _ = writeln!(
            s,
            "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{cw:.1}\" height=\"{ch:.1}\" fill=\"{}\"><title>{src},{tgt}: {v:e}</title></rect>",
            MARGIN + src as f64 * cw,
            H - MARGIN - (tgt + 1) as f64 * ch,
            colour(t)
        );
    }
    let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">min {lo:.3e} / max {hi:.3e}</text>", W - 10.0, 44.0);
    axis_labels(&mut s, "source in-degree", "target in-degree");
    s.push_str("</svg>\n");
    Ok(s)
}

/// Line plot of the mean rows of a `gamma,seed,method,mean_te` table.
pub fn curves_from_csv(csv: &str, title: &str) -> Result<String, String> {
    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows(csv, te_motifs::experiments::WS_CURVE_HEADER)? {
        if r[1] == "mean" {
            series.entry(r[2].clone()).or_default().push((num(&r[0])?, num(&r[3])?));
        }
    }
    let points: Vec<(f64, f64)> = series.values().flatten().copied().collect();
    if points.is_empty() {
        return Err("no mean rows".into());
    }
    let lo = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let px = |g: f64| MARGIN + g * (W - 2.0 * MARGIN);
    let py = |v: f64| H - MARGIN - (v - lo) / span * (H - 2.0 * MARGIN);
    let mut s = open(title);
    for (i, (method, pts)) in series.iter().enumerate() {
        let c = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts.iter().map(|&(g, v)| format!("{:.1},{:.1}", px(g), py(v))).collect();
        let _ = writeln!(s, "<polyline fill=\"none\" stroke=\"{c}\" stroke-width=\"2\" points=\"{}\"/>", path.join(" "));
        for &(g, v) in pts {
            let _ = writeln!(s, "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"{c}\"/>", px(g), py(v));
        }
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" fill=\"{c}\">{method}</text>",
            W - MARGIN - 100.0,
            MARGIN + 16.0 * i as f64
        );
    }
    let _ = writeln!(s, "<text x=\"{MARGIN}\" y=\"{}\">{lo:.3e}</text>", H - MARGIN + 14.0);
    let _ = writeln!(s, "<text x=\"{MARGIN}\" y=\"{}\">{hi:.3e}</text>", MARGIN - 6.0);
    axis_labels(&mut s, "rewiring probability", "mean TE");
    s.push_str("</svg>\n");
    Ok(s)
}
