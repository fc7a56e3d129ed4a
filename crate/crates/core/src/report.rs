//! Result documents, CSV error profiles and SVG error maps.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disc::ApproxResult;
use crate::func::{DomainSpec, FunctionSpec};
use crate::sup::{chordal_profile, point_at, GridSpec, SamplePoint};

/// Schema version written into every document.
pub const SCHEMA_VERSION: u32 = 1;

/// Header comment of the CSV profile.
pub const CSV_ORDER_NOTE: &str = "# rows in grid-major order: component, then radial index, then angular index";

/// What `approximate` writes to `result.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub v: u32,
    pub target: FunctionSpec,
    pub domain: DomainSpec,
    pub eps: f64,
    pub family: String,
    pub construction_grid: GridSpec,
    pub result: ApproxResult,
    /// Seconds since the Unix epoch; the only field that varies between identical runs.
    pub timestamp: u64,
}

impl ResultDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Pointwise error of `approximant` against `target` as CSV.
pub fn profile_csv(target: &FunctionSpec, approximant: &FunctionSpec, domain: &DomainSpec, grid: &GridSpec) -> String {
    let rows = chordal_profile(target, approximant, domain, grid);
    let mut out = String::with_capacity(rows.len() * 48 + 128);
    out.push_str(CSV_ORDER_NOTE);
    out.push('\n');
    out.push_str("z_re,z_im,chi_error\n");
    for (p, e) in rows {
        let _ = writeln!(out, "{},{},{}", p.z.re, p.z.im, e);
    }
    out
}

fn bounding_box(domain: &DomainSpec) -> (f64, f64, f64, f64) {
    let pts = domain.boundary_samples(256);
    let mut b = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for z in pts {
        b = (b.0.min(z.re), b.1.max(z.re), b.2.min(z.im), b.3.max(z.im));
    }
    b
}

/// Polar heat map: each grid cell is filled with opacity proportional to the χ error.
pub fn error_svg(target: &FunctionSpec, approximant: &FunctionSpec, domain: &DomainSpec, grid: &GridSpec) -> String {
    const SIZE: f64 = 512.0;
    let (x0, x1, y0, y1) = bounding_box(domain);
    let span = (x1 - x0).max(y1 - y0).max(1e-12) * 1.1;
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let map = |z: Complex64| ((z.re - cx) / span * SIZE + SIZE / 2.0, SIZE / 2.0 - (z.im - cy) / span * SIZE);
    let rows = chordal_profile(target, approximant, domain, grid);
    let peak = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let opacity = |e: f64| if peak > 0.0 { e / peak } else { 0.0 };
    let prims = domain.components();

    let mut svg = String::new();
    let _ = writeln!(svg, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">");
    let _ = writeln!(svg, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    for (p, e) in &rows {
        let prim = prims[p.component];
        let o = opacity(*e);
        if o == 0.0 {
            continue;
        }
        match cell(prim, p, grid) {
            Cell::Quad(corners) => {
                let pts: Vec<String> = corners.iter().map(|&z| map(z)).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(svg, "<polygon points=\"{}\" fill=\"crimson\" fill-opacity=\"{o:.4}\"/>", pts.join(" "));
            }
            Cell::Dot(z) => {
                let (x, y) = map(z);
                let _ = writeln!(svg, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2\" fill=\"crimson\" fill-opacity=\"{o:.4}\"/>");
            }
        }
    }
    for prim in &prims {
        let pts: Vec<String> = prim.boundary_samples(256).into_iter().map(map).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let tag = if matches!(prim, DomainSpec::Arc { .. }) { "polyline" } else { "polygon" };
        let _ = writeln!(svg, "<{tag} points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>", pts.join(" "));
    }
    let _ = writeln!(svg, "<text x=\"8\" y=\"20\" font-family=\"monospace\" font-size=\"12\">max chi error {peak:.4e}</text>");
    svg.push_str("</svg>\n");
    svg
}

enum Cell {
    Quad([Complex64; 4]),
    Dot(Complex64),
}

fn cell(prim: &DomainSpec, p: &SamplePoint, grid: &GridSpec) -> Cell {
    if !prim.is_solid() {
        return Cell::Dot(p.z);
    }
    let du = 0.5 / grid.radial_count as f64;
    let dv = 0.5 / grid.angular_count as f64;
    let (u0, u1) = ((p.u - du).max(0.0), (p.u + du).min(1.0));
    let (v0, v1) = (p.v - dv, p.v + dv);
    Cell::Quad([point_at(prim, u0, v0), point_at(prim, u1, v0), point_at(prim, u1, v1), point_at(prim, u0, v1)])
}

/// Short human-readable summary of a result document.
pub fn summary(doc: &ResultDocument) -> String {
    let r = &doc.result;
    let mut s = String::new();
    let _ = writeln!(s, "family:          {}", doc.family);
    let _ = writeln!(s, "target eps:      {}", doc.eps);
    let _ = writeln!(s, "achieved error:  {:.6e} (stable: {})", r.achieved_error.value, r.achieved_error.stable);
    let _ = writeln!(s, "argmax point:    {}", r.achieved_error.argmax_point);
    let _ = writeln!(
        s,
        "verification:    {}x{} grid",
        r.achieved_error.grid_used.radial_count, r.achieved_error.grid_used.angular_count
    );
    match r.dilation_r {
        Some(x) => {
            let _ = writeln!(s, "dilation r:      {x}");
        }
        None => {
            let _ = writeln!(s, "dilation r:      none");
        }
    }
    let _ = writeln!(s, "degree N:        {}", r.degree_n);
    if !r.notes.is_empty() {
        let _ = writeln!(s, "notes:           {}", r.notes);
    }
    s
}
