use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::GeneratorSpec;
use crate::graph::Graph;

const CANVAS: f64 = 480.0;
const MARGIN: f64 = 40.0;
const NODE_RADIUS: f64 = 14.0;
const SPRING_ITERATIONS: usize = 300;
const SPRING_SEED: u64 = 0x5eed;

const WHITE: [f64; 3] = [255.0, 255.0, 255.0];
const RED: [f64; 3] = [178.0, 24.0, 43.0];
const BLUE: [f64; 3] = [33.0, 102.0, 172.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Vertices on a circle; an optional hub sits at the centre.
    Circular { hub: Option<usize> },
    Line,
    /// Breadth-first levels from vertex 0.
    Layered,
    Spring,
}

impl Layout {
    pub fn for_generator(spec: Option<&GeneratorSpec>) -> Self {
        match spec {
            Some(GeneratorSpec::Cycle { .. } | GeneratorSpec::Complete { .. } | GeneratorSpec::MobiusLadder { .. }) => {
                Layout::Circular { hub: None }
            }
            Some(GeneratorSpec::Star { .. } | GeneratorSpec::Wheel { .. }) => Layout::Circular { hub: Some(0) },
            Some(GeneratorSpec::Path { .. }) => Layout::Line,
            Some(GeneratorSpec::BalancedTree { .. }) => Layout::Layered,
            _ => Layout::Spring,
        }
    }

    /// Positions in the unit square.
    pub fn positions(&self, g: &Graph) -> Vec<(f64, f64)> {
        let n = g.n_agents();
        match *self {
            Layout::Circular { hub } => {
                let ring: Vec<usize> = (0..n).filter(|&i| Some(i) != hub).collect();
                let mut pos = vec![(0.5, 0.5); n];
                for (j, &i) in ring.iter().enumerate() {
                    let a = PI / 2.0 - 2.0 * PI * j as f64 / ring.len() as f64;
                    pos[i] = (0.5 + 0.5 * a.cos(), 0.5 - 0.5 * a.sin());
                }
                pos
            }
            Layout::Line => (0..n)
                .map(|i| (if n > 1 { i as f64 / (n - 1) as f64 } else { 0.5 }, 0.5))
                .collect(),
            Layout::Layered => layered(g),
            Layout::Spring => spring(g),
        }
    }
}

fn layered(g: &Graph) -> Vec<(f64, f64)> {
    let n = g.n_agents();
    let mut depth = vec![usize::MAX; n];
    let mut levels: Vec<Vec<usize>> = Vec::new();
    // Unreached vertices go to an extra bottom level.
    let mut queue = VecDeque::from([0]);
    depth[0] = 0;
    while let Some(i) = queue.pop_front() {
        if levels.len() <= depth[i] {
            levels.push(Vec::new());
        }
        levels[depth[i]].push(i);
        for k in g.neighbors(i) {
            if depth[k] == usize::MAX {
                depth[k] = depth[i] + 1;
                queue.push_back(k);
            }
        }
    }
    let rest: Vec<usize> = (0..n).filter(|&i| depth[i] == usize::MAX).collect();
    if !rest.is_empty() {
        levels.push(rest);
    }
    let rows = levels.len();
    let mut pos = vec![(0.5, 0.5); n];
    for (r, level) in levels.iter().enumerate() {
        let y = if rows > 1 { r as f64 / (rows - 1) as f64 } else { 0.5 };
        for (j, &i) in level.iter().enumerate() {
            pos[i] = ((j as f64 + 0.5) / level.len() as f64, y);
        }
    }
    pos
}

/// Fruchterman–Reingold with a fixed seed and linear cooling.
fn spring(g: &Graph) -> Vec<(f64, f64)> {
    let n = g.n_agents();
    let mut rng = ChaCha8Rng::seed_from_u64(SPRING_SEED);
    let mut pos: Vec<(f64, f64)> = (0..n).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect();
    let k = (1.0 / n as f64).sqrt();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    for step in 0..SPRING_ITERATIONS {
        let temp = 0.1 * (1.0 - step as f64 / SPRING_ITERATIONS as f64);
        let mut disp = vec![(0.0, 0.0); n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
                let dist = (dx * dx + dy * dy).sqrt().max(1e-6);
                let f = k * k / dist;
                disp[i].0 += dx / dist * f;
                disp[i].1 += dy / dist * f;
            }
        }
        for &(i, j) in &edges {
            let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
            let dist = (dx * dx + dy * dy).sqrt().max(1e-6);
            let f = dist * dist / k;
            disp[i].0 -= dx / dist * f;
            disp[i].1 -= dy / dist * f;
            disp[j].0 += dx / dist * f;
            disp[j].1 += dy / dist * f;
        }
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = (d.0 * d.0 + d.1 * d.1).sqrt().max(1e-12);
            let s = len.min(temp) / len;
            p.0 += d.0 * s;
            p.1 += d.1 * s;
        }
    }
    normalize(pos)
}

fn normalize(pos: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pos {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    pos.into_iter()
        .map(|(x, y)| (0.5 + (x - cx) / span, 0.5 + (y - cy) / span))
        .collect()
}

/// Diverging colour for `v` on the scale `[-scale, scale]`: blue below zero, red above, white at zero.
pub fn diverging_color(v: f64, scale: f64) -> String {
    let t = (v / scale).clamp(-1.0, 1.0);
    let end = if t >= 0.0 { RED } else { BLUE };
    let a = t.abs();
    let c: Vec<u8> = (0..3)
        .map(|j| (WHITE[j] + (end[j] - WHITE[j]) * a).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Network drawing with agents coloured by opinion. The colour scale is
/// `max(max |x_i|, floor)` so that unopinionated states stay pale.
pub fn network_svg(g: &Graph, layout: Layout, x: &[f64], floor: f64, title: &str) -> String {
    let pos: Vec<(f64, f64)> = layout
        .positions(g)
        .into_iter()
        .map(|(px, py)| (MARGIN + px * (CANVAS - 2.0 * MARGIN), MARGIN + py * (CANVAS - 2.0 * MARGIN)))
        .collect();
    let scale = x.iter().fold(floor, |m, v| m.max(v.abs()));
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = CANVAS,
        h = CANVAS + 24.0
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        CANVAS / 2.0,
        CANVAS + 14.0,
        escape(title)
    );
    let _ = writeln!(s, r##"<g stroke="#888888" stroke-width="1.5">"##);
    for (i, k) in g.edges() {
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
            pos[i].0, pos[i].1, pos[k].0, pos[k].1
        );
    }
    let _ = writeln!(s, "</g>");
    for (i, &(px, py)) in pos.iter().enumerate() {
        let _ = writeln!(
            s,
            r##"<circle cx="{px:.2}" cy="{py:.2}" r="{NODE_RADIUS}" fill="{}" stroke="#222222"><title>agent {}: {:.4}</title></circle>"##,
            diverging_color(x[i], scale),
            i + 1,
            x[i]
        );
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            py + 4.0,
            i + 1
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
