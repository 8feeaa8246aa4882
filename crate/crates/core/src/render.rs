//! SVG drawings of hopping structures, one stroke class per bond class.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fermion::{bond_class, BondClass, Chromosome};
use crate::lattice::{Lattice, Point};

const BOND_PX: f64 = 40.0;
const MARGIN_PX: f64 = 20.0;
const SITE_RADIUS_PX: f64 = 4.0;

fn stroke(class: BondClass) -> (&'static str, &'static str, f64) {
    match class {
        BondClass::Weak => ("weak", "#d3d3d3", 1.5),
        BondClass::Medium => ("medium", "#808080", 2.5),
        BondClass::Strong => ("strong", "#000000", 4.0),
    }
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

/// Shortest periodic image of `d`, and whether it differs from `d`.
fn minimum_image(d: Point, cell: Option<[Point; 2]>) -> (Point, bool) {
    let Some([l1, l2]) = cell else {
        return (d, false);
    };
    let mut best = d;
    let mut wrapped = false;
    for a in -1..=1 {
        for b in -1..=1 {
            let (a, b) = (a as f64, b as f64);
            let cand = [d[0] + a * l1[0] + b * l2[0], d[1] + a * l1[1] + b * l2[1]];
            if norm(cand) < norm(best) - 1e-9 {
                best = cand;
                wrapped = true;
            }
        }
    }
    (best, wrapped)
}

/// Draws sites as circles and one `<path>` per bond. Bonds that cross the
/// periodic boundary are drawn as two half-length stubs pointing at the
/// nearest image of the partner site. Output is byte-stable.
pub fn render_structure_svg(lattice: &Lattice, chromosome: &Chromosome) -> Result<String> {
    let coords = lattice
        .coords()
        .ok_or_else(|| Error::MissingCoords(lattice.name().to_string()))?;
    if chromosome.len() != lattice.n_edges() {
        return Err(Error::LengthMismatch {
            expected: lattice.n_edges(),
            got: chromosome.len(),
        });
    }
    let bonds: Vec<(Point, bool)> = lattice
        .edges()
        .iter()
        .map(|&(i, j)| minimum_image(sub(coords[j], coords[i]), lattice.cell()))
        .collect();
    let unit = bonds
        .iter()
        .map(|(d, _)| norm(*d))
        .filter(|&l| l > 1e-9)
        .fold(f64::INFINITY, f64::min);
    let scale = if unit.is_finite() {
        BOND_PX / unit
    } else {
        BOND_PX
    };

    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in coords {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let width = (hi[0] - lo[0]) * scale + 2.0 * MARGIN_PX;
    let height = (hi[1] - lo[1]) * scale + 2.0 * MARGIN_PX;
    // y grows downward in SVG
    let px = |p: Point| {
        [
            (p[0] - lo[0]) * scale + MARGIN_PX,
            (hi[1] - p[1]) * scale + MARGIN_PX,
        ]
    };

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    )
    .unwrap();
    writeln!(svg, "<title>{}</title>", lattice.name()).unwrap();
    writeln!(svg, r#"<g fill="none" stroke-linecap="round">"#).unwrap();
    for (k, (&(i, j), &(d, wrapped))) in lattice.edges().iter().zip(&bonds).enumerate() {
        let (class, color, width) = stroke(bond_class(chromosome[k]));
        let a = px(coords[i]);
        let b = px(coords[j]);
        let path = if wrapped {
            let half = [d[0] / 2.0, d[1] / 2.0];
            let a2 = px([coords[i][0] + half[0], coords[i][1] + half[1]]);
            let b2 = px([coords[j][0] - half[0], coords[j][1] - half[1]]);
            format!(
                "M{:.2} {:.2}L{:.2} {:.2}M{:.2} {:.2}L{:.2} {:.2}",
                a[0], a[1], a2[0], a2[1], b[0], b[1], b2[0], b2[1]
            )
        } else {
            format!("M{:.2} {:.2}L{:.2} {:.2}", a[0], a[1], b[0], b[1])
        };
        writeln!(
            svg,
            r#"<path class="{class}" data-edge="{k}" stroke="{color}" stroke-width="{width}" d="{path}"/>"#
        )
        .unwrap();
    }
    writeln!(svg, "</g>").unwrap();
    writeln!(
        svg,
        r##"<g fill="#ffffff" stroke="#000000" stroke-width="1">"##
    )
    .unwrap();
    for p in coords {
        let [x, y] = px(*p);
        writeln!(
            svg,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{SITE_RADIUS_PX}"/>"#
        )
        .unwrap();
    }
    writeln!(svg, "</g>").unwrap();
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion::Hoppings;
    use crate::lattice::{build_ring, build_square};
    use crate::motif::{seed_motif, MotifKind};

    fn count(svg: &str, class: &str) -> usize {
        svg.matches(&format!(r#"class="{class}""#)).count()
    }

    #[test]
    fn dimerized_ring() {
        let ring = build_ring(32).unwrap();
        let chrom = seed_motif(&ring, MotifKind::DimerTiling, -5.0, 0.0).unwrap();
        let svg = render_structure_svg(&ring, &chrom).unwrap();
        assert_eq!(count(&svg, "strong"), 16);
        assert_eq!(count(&svg, "weak"), 16);
        assert_eq!(svg.matches("<circle").count(), 32);
        assert_eq!(svg, render_structure_svg(&ring, &chrom).unwrap());
    }

    #[test]
    fn plaquettes_and_medium_bonds() {
        let sq = build_square(6, 6, true).unwrap();
        let chrom = seed_motif(&sq, MotifKind::PlaquetteTiling, -5.0, 0.0).unwrap();
        let svg = render_structure_svg(&sq, &chrom).unwrap();
        assert_eq!(count(&svg, "strong"), 36);
        assert_eq!(count(&svg, "weak"), 36);
        let svg = render_structure_svg(&sq, &Hoppings::uniform(72, -2.0)).unwrap();
        assert_eq!(count(&svg, "medium"), 72);
        // 12 wrapping bonds drawn as two stubs
        assert_eq!(svg.matches('M').count(), 72 + 12);
    }

    #[test]
    fn errors() {
        let bare = Lattice::new("bare", 2, [(0, 1)], None).unwrap();
        assert!(matches!(
            render_structure_svg(&bare, &Hoppings::uniform(1, -1.0)),
            Err(Error::MissingCoords(_))
        ));
        let ring = build_ring(4).unwrap();
        assert!(render_structure_svg(&ring, &Hoppings::uniform(3, -1.0)).is_err());
    }
}
