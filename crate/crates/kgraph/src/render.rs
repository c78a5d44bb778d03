//! DOT and SVG drawings of a single graph.
//!
//! Vertices sit at their lattice positions. Coincident copies of an edge are
//! drawn once and labelled with their count. For k > 2 only the first two
//! coordinates are used.

use std::fmt::Write;

use kgraph_core::vgraph::VectorGraph;

/// Edge colours by vector index, cycled when n exceeds the palette.
pub const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

pub fn colour(vec_index: usize) -> &'static str {
    PALETTE[vec_index % PALETTE.len()]
}

/// True when the drawing loses information (k > 2).
pub fn is_projected(g: &VectorGraph) -> bool {
    g.system().k() > 2
}

fn plane(v: &[i64]) -> (i64, i64) {
    (v.first().copied().unwrap_or(0), v.get(1).copied().unwrap_or(0))
}

pub fn to_dot(g: &VectorGraph, name: &str) -> String {
    let verts = g.vertices();
    let mut out = String::new();
    writeln!(out, "digraph \"{name}\" {{").unwrap();
    out.push_str("  node [shape=circle, width=0.12, fixedsize=true, label=\"\"];\n");
    for (i, v) in verts.iter().enumerate() {
        let (x, y) = plane(v);
        writeln!(out, "  v{i} [pos=\"{x},{y}!\", tooltip=\"{v}\"];").unwrap();
    }
    for (e, count) in g.edges() {
        let t = verts.binary_search(&e.tail).expect("tail is a vertex");
        let h = verts.binary_search(&e.head).expect("head is a vertex");
        let label = if count > 1 {
            format!("s{} x{count}", e.vec_index + 1)
        } else {
            format!("s{}", e.vec_index + 1)
        };
        writeln!(
            out,
            "  v{t} -> v{h} [label=\"{label}\", color=\"{c}\", fontcolor=\"{c}\", count={count}];",
            c = colour(e.vec_index)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

const UNIT: i64 = 60;
const MARGIN: i64 = 40;
const RADIUS: f64 = 4.0;

pub fn to_svg(g: &VectorGraph) -> String {
    let n = g.system().n();
    let verts = g.vertices();
    let pts: Vec<(i64, i64)> = verts.iter().map(|v| plane(v)).collect();
    let (min_x, max_x) = minmax(pts.iter().map(|p| p.0));
    let (min_y, max_y) = minmax(pts.iter().map(|p| p.1));
    let legend_h = 20 * n as i64 + 10;
    let width = (max_x - min_x) * UNIT + 2 * MARGIN + 60;
    let height = ((max_y - min_y) * UNIT + 2 * MARGIN).max(legend_h + MARGIN);
    let px = |x: i64| MARGIN + (x - min_x) * UNIT;
    let py = |y: i64| MARGIN + (max_y - y) * UNIT;

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    )
    .unwrap();
    out.push_str("<defs>\n");
    for i in 0..n {
        writeln!(
            out,
            "<marker id=\"a{i}\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"7\" markerHeight=\"7\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"{}\"/></marker>",
            colour(i)
        )
        .unwrap();
    }
    out.push_str("</defs>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    out.push_str("<g fill=\"#cccccc\">\n");
    for y in min_y..=max_y {
        for x in min_x..=max_x {
            writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"1.5\"/>", px(x), py(y)).unwrap();
        }
    }
    out.push_str("</g>\n");

    for (e, count) in g.edges() {
        let (tx, ty) = plane(&e.tail);
        let (hx, hy) = plane(&e.head);
        let (x1, y1, x2, y2) = (px(tx) as f64, py(ty) as f64, px(hx) as f64, py(hy) as f64);
        let len = ((x2 - x1).powi(2) + (y2 - y1).powi(2)).sqrt().max(1.0);
        let (ux, uy) = ((x2 - x1) / len, (y2 - y1) / len);
        let c = colour(e.vec_index);
        writeln!(
            out,
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"{c}\" stroke-width=\"1.6\" marker-end=\"url(#a{})\"/>",
            x1 + ux * RADIUS,
            y1 + uy * RADIUS,
            x2 - ux * RADIUS,
            y2 - uy * RADIUS,
            e.vec_index
        )
        .unwrap();
        if count > 1 {
            // small count beside the midpoint, offset to the left of travel
            let (mx, my) = ((x1 + x2) / 2.0 - uy * 9.0, (y1 + y2) / 2.0 + ux * 9.0);
            writeln!(
                out,
                "<text x=\"{mx:.1}\" y=\"{my:.1}\" font-size=\"10\" fill=\"{c}\" text-anchor=\"middle\" dominant-baseline=\"middle\" class=\"count\">{count}</text>"
            )
            .unwrap();
        }
    }

    out.push_str("<g fill=\"black\">\n");
    for &(x, y) in &pts {
        writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"{RADIUS}\"/>", px(x), py(y)).unwrap();
    }
    out.push_str("</g>\n");

    let lx = width - 50;
    for i in 0..n {
        let y = MARGIN + 20 * i as i64;
        writeln!(
            out,
            "<line x1=\"{lx}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{}\" stroke-width=\"2\"/><text x=\"{}\" y=\"{}\" font-size=\"11\">s{}</text>",
            lx + 18,
            colour(i),
            lx + 22,
            y + 4,
            i + 1
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn minmax(it: impl Iterator<Item = i64>) -> (i64, i64) {
    it.fold(None, |acc: Option<(i64, i64)>, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
    .unwrap_or((0, 0))
}
