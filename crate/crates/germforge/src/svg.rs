//! Standalone SVG 1.1 rendering of bifurcation diagrams and two-parameter
//! transition sets.
//!
//! Diagrams put `λ` on the horizontal axis and the state variable `x` on the
//! vertical axis. Transition-set plots live in the `(α₁, α₂)` plane; each
//! component's zero curve is traced by marching squares on a sample grid,
//! clipped by the component's sign side condition where one was found (which
//! is what turns the double-limit line of the quartic family into a
//! half-line). Everything is emitted as plain `<polyline>` and `<text>`
//! elements — no scripts, no external references.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::transition::{BifurcationDiagram, Descriptor, TransitionComponent, TransitionSet};
use crate::vars::Var;
use std::fmt::Write as _;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;

/// An affine map from data coordinates to the SVG viewport (y flipped).
struct Frame {
    lo: (f64, f64),
    hi: (f64, f64),
}

impl Frame {
    fn new(lo: (f64, f64), hi: (f64, f64)) -> Frame {
        Frame { lo, hi }
    }

    fn map(&self, p: (f64, f64)) -> (f64, f64) {
        let sx = (WIDTH - 2.0 * MARGIN) / (self.hi.0 - self.lo.0);
        let sy = (HEIGHT - 2.0 * MARGIN) / (self.hi.1 - self.lo.1);
        (
            MARGIN + (p.0 - self.lo.0) * sx,
            HEIGHT - MARGIN - (p.1 - self.lo.1) * sy,
        )
    }
}

fn open_svg(out: &mut String) {
    out.push_str(concat!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" ",
        "width=\"480\" height=\"480\" viewBox=\"0 0 480 480\">\n",
        "  <rect width=\"480\" height=\"480\" fill=\"white\"/>\n",
    ));
}

fn fmt_coord(v: f64) -> String {
    format!("{:.2}", v)
}

/// Axes through the data origin when it is inside the box, else along the
/// lower/left edge, with the axis labels.
fn axes(out: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let x0 = if f.lo.0 <= 0.0 && 0.0 <= f.hi.0 { 0.0 } else { f.lo.0 };
    let y0 = if f.lo.1 <= 0.0 && 0.0 <= f.hi.1 { 0.0 } else { f.lo.1 };
    let (ax, ay) = f.map((f.lo.0, y0));
    let (bx, _) = f.map((f.hi.0, y0));
    writeln!(
        out,
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
        fmt_coord(ax),
        fmt_coord(ay),
        fmt_coord(bx),
        fmt_coord(ay)
    )
    .unwrap();
    let (cx, cy) = f.map((x0, f.lo.1));
    let (_, dy) = f.map((x0, f.hi.1));
    writeln!(
        out,
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
        fmt_coord(cx),
        fmt_coord(cy),
        fmt_coord(cx),
        fmt_coord(dy)
    )
    .unwrap();
    writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"end\">{}</text>",
        fmt_coord(bx),
        fmt_coord(ay - 6.0),
        xlabel
    )
    .unwrap();
    writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" font-size=\"14\">{}</text>",
        fmt_coord(cx + 6.0),
        fmt_coord(dy + 14.0),
        ylabel
    )
    .unwrap();
}

fn polyline(out: &mut String, f: &Frame, pts: &[(f64, f64)], color: &str) {
    if pts.len() < 2 {
        return;
    }
    let coords: Vec<String> = pts
        .iter()
        .map(|&p| {
            let (x, y) = f.map(p);
            format!("{},{}", fmt_coord(x), fmt_coord(y))
        })
        .collect();
    writeln!(
        out,
        "  <polyline class=\"curve\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>",
        color,
        coords.join(" ")
    )
    .unwrap();
}

/// Render a traced bifurcation diagram; the vertical axis is the state
/// variable `x`.
pub fn diagram_svg(d: &BifurcationDiagram) -> String {
    let mut xs: Vec<f64> = Vec::new();
    for b in &d.branches {
        xs.extend(b.iter().map(|p| p.1));
    }
    let (mut xlo, mut xhi) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    if !xlo.is_finite() || xhi - xlo < 1e-9 {
        (xlo, xhi) = (-1.0, 1.0);
    }
    let pad = 0.1 * (xhi - xlo);
    let llo = d.lambda.first().copied().unwrap_or(-1.0);
    let lhi = d.lambda.last().copied().unwrap_or(1.0);
    let f = Frame::new((llo, xlo - pad), (lhi, xhi + pad));
    let mut out = String::new();
    open_svg(&mut out);
    axes(&mut out, &f, "lambda", "x");
    for b in &d.branches {
        polyline(&mut out, &f, b, "#1f5fbf");
    }
    out.push_str("</svg>\n");
    out
}

/// Zero-curve segments of `sigma` over `[lo, hi]²` by marching squares on an
/// `n × n` cell grid, keeping only cells allowed by `mask`.
fn zero_segments(
    sigma: &Polynomial,
    lo: (f64, f64),
    hi: (f64, f64),
    n: usize,
    mask: &dyn Fn(f64, f64) -> bool,
) -> Vec<((f64, f64), (f64, f64))> {
    let nv = sigma.vars().len();
    debug_assert_eq!(nv, 2);
    let hx = (hi.0 - lo.0) / n as f64;
    let hy = (hi.1 - lo.1) / n as f64;
    let value = |i: usize, j: usize| {
        let p = [lo.0 + i as f64 * hx, lo.1 + j as f64 * hy];
        sigma.eval_f64(&p)
    };
    // Corner values once per lattice point.
    let mut grid = vec![0.0f64; (n + 1) * (n + 1)];
    for i in 0..=n {
        for j in 0..=n {
            grid[i * (n + 1) + j] = value(i, j);
        }
    }
    let mut segs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let x0 = lo.0 + i as f64 * hx;
            let y0 = lo.1 + j as f64 * hy;
            if !mask(x0 + hx / 2.0, y0 + hy / 2.0) {
                continue;
            }
            let v = [
                grid[i * (n + 1) + j],
                grid[(i + 1) * (n + 1) + j],
                grid[(i + 1) * (n + 1) + j + 1],
                grid[i * (n + 1) + j + 1],
            ];
            // Cell corners counterclockwise from (x0, y0).
            let corner = [
                (x0, y0),
                (x0 + hx, y0),
                (x0 + hx, y0 + hy),
                (x0, y0 + hy),
            ];
            let mut crossings: Vec<(f64, f64)> = Vec::new();
            for e in 0..4 {
                let (a, b) = (v[e], v[(e + 1) % 4]);
                if (a <= 0.0 && b > 0.0) || (a > 0.0 && b <= 0.0) {
                    let t = if (a - b).abs() < f64::MIN_POSITIVE {
                        0.5
                    } else {
                        a / (a - b)
                    };
                    let (pa, pb) = (corner[e], corner[(e + 1) % 4]);
                    crossings.push((pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1)));
                }
            }
            // Two crossings give a segment; four (saddle cell) give two,
            // paired in edge order — adequate at plotting resolution.
            let mut it = crossings.chunks_exact(2);
            for pair in &mut it {
                segs.push((pair[0], pair[1]));
            }
        }
    }
    segs
}

fn component_mask(c: &TransitionComponent, alphas: &[Var]) -> Box<dyn Fn(f64, f64) -> bool> {
    for d in &c.side.descriptors {
        if let Descriptor::Sign { var, nonpositive } = d {
            if let Some(pos) = alphas.iter().position(|a| a == var) {
                let np = *nonpositive;
                return Box::new(move |x, y| {
                    let coord = if pos == 0 { x } else { y };
                    if np {
                        coord <= 0.0
                    } else {
                        coord >= 0.0
                    }
                });
            }
        }
        if matches!(d, Descriptor::EmptyReal) {
            return Box::new(|_, _| false);
        }
    }
    Box::new(|_, _| true)
}

/// Render a two-parameter transition set over the box `[lo, hi]²`. Errors
/// when the parameter space is not two-dimensional; callers fall back to the
/// JSON dump in that case.
pub fn transition_svg(t: &TransitionSet, lo: f64, hi: f64) -> Result<String> {
    let alphas: Vec<Var> = t.alpha_vars.iter().collect();
    if alphas.len() != 2 {
        return Err(Error::invalid(format!(
            "transition-set plots need exactly 2 parameters, got {}",
            alphas.len()
        )));
    }
    let f = Frame::new((lo, lo), (hi, hi));
    let mut out = String::new();
    open_svg(&mut out);
    axes(
        &mut out,
        &f,
        &alphas[0].to_string(),
        &alphas[1].to_string(),
    );
    let colors = ["#bf1f1f", "#1f8f1f", "#1f5fbf"];
    for (c, color) in t.components().into_iter().zip(colors) {
        let Some(sigma) = c.cutting_surface() else {
            continue;
        };
        let mask = component_mask(c, &alphas);
        for (a, b) in zero_segments(sigma, (lo, lo), (hi, hi), 160, &*mask) {
            polyline(&mut out, &f, &[a, b], color);
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{parse_germ, parse_unfolding};
    use crate::transition::{diagram_trace, transition_set};
    use crate::unfolding::{unfold, Unfolding};
    use crate::vars::VarList;

    #[test]
    fn fold_diagram_is_a_leftward_parabola() {
        let g = parse_germ("x^2+lambda")
            .unwrap()
            .to_polynomial(&VarList::xl())
            .unwrap();
        let d = diagram_trace(&g, &[], -1.0, 1.0, 100, 1e-9).unwrap();
        let svg = diagram_svg(&d);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains("version=\"1.1\""));
        assert!(svg.contains(">lambda</text>"));
        assert!(svg.contains(">x</text>"));
        assert!(svg.contains("class=\"curve\""));
        // Every solution point sits at λ ≤ 0: the parabola opens leftward.
        for b in &d.branches {
            assert!(b.iter().all(|p| p.0 <= 1e-9));
        }
    }

    #[test]
    fn quartic_transition_plot_clips_half_line() {
        let base = parse_germ("x^4+lambda")
            .unwrap()
            .to_polynomial(&VarList::xl())
            .unwrap();
        let u = unfold(&base).unwrap();
        let t = transition_set(&u).unwrap();
        let svg = transition_svg(&t, -1.0, 1.0).unwrap();
        assert!(svg.contains("version=\"1.1\""));
        assert!(svg.contains(">alpha1</text>"));
        assert!(svg.contains(">alpha2</text>"));
        // Hysteresis cusp and the double-limit half-line both appear.
        assert!(svg.contains("#1f8f1f"));
        assert!(svg.contains("#1f5fbf"));
        // The double-limit line α₁ = 0 is clipped to α₂ ≤ 0.
        let d = &t.double_limit;
        let mask = component_mask(d, &[Var::Alpha(1), Var::Alpha(2)]);
        let segs = zero_segments(
            d.cutting_surface().unwrap(),
            (-1.0, -1.0),
            (1.0, 1.0),
            160,
            &*mask,
        );
        assert!(!segs.is_empty());
        for (a, b) in segs {
            assert!(a.1 <= 0.0125 && b.1 <= 0.0125);
        }
    }

    #[test]
    fn empty_transition_set_plots_axes_only() {
        let g = parse_unfolding("x^2+lambda+alpha1+alpha2*x")
            .unwrap()
            .to_polynomial(&VarList::unfolding(2))
            .unwrap();
        let u = Unfolding::from_polynomial(&g).unwrap();
        let t = transition_set(&u).unwrap();
        assert!(t.components().iter().all(|c| c.is_empty()));
        let svg = transition_svg(&t, -1.0, 1.0).unwrap();
        assert!(svg.contains("<line"));
        assert!(!svg.contains("class=\"curve\""));
    }

    #[test]
    fn three_parameters_fall_back_to_json() {
        let g = parse_unfolding("x^4+lambda*x+alpha1+alpha2*lambda+alpha3*x^2")
            .unwrap()
            .to_polynomial(&VarList::unfolding(3))
            .unwrap();
        let u = Unfolding::from_polynomial(&g).unwrap();
        let t = transition_set(&u).unwrap();
        assert!(transition_svg(&t, -1.0, 1.0).is_err());
    }
}
