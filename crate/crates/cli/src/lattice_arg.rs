use std::path::Path;

use anyhow::{bail, Context, Result};
use tbconc::io::read_lattice_file;
use tbconc::{build_betts, build_kagome, build_ring, build_square, build_triangular, Lattice};

pub const BUILTINS: &str = "ring, square, square-open, kagome, betts, triangular";

fn dims(size: Option<&str>, default: (usize, usize)) -> Result<(usize, usize)> {
    let Some(size) = size else {
        return Ok(default);
    };
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .with_context(|| format!("bad size component {s:?}"))
    };
    match size.split_once(['x', 'X']) {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => {
            let a = parse(size)?;
            Ok((a, a))
        }
    }
}

/// Builds a named lattice or loads a lattice document from a file.
///
/// Sizes: `ring` takes a site count; `square`, `square-open` and
/// `triangular` take `LXxLY` sites; `kagome` and `betts` take `CXxCY` unit
/// cells. A single number means a square shape.
pub fn resolve(spec: &str, size: Option<&str>) -> Result<Lattice> {
    let lattice = match spec {
        "ring" => {
            let n = match size {
                Some(s) => s.parse().with_context(|| format!("bad ring size {s:?}"))?,
                None => 16,
            };
            build_ring(n)?
        }
        "square" => {
            let (lx, ly) = dims(size, (6, 6))?;
            build_square(lx, ly, true)?
        }
        "square-open" => {
            let (lx, ly) = dims(size, (6, 6))?;
            build_square(lx, ly, false)?
        }
        "kagome" => {
            let (cx, cy) = dims(size, (4, 4))?;
            build_kagome(cx, cy)?
        }
        "betts" => {
            let (cx, cy) = dims(size, (4, 2))?;
            build_betts(cx, cy)?
        }
        "triangular" => {
            let (lx, ly) = dims(size, (8, 6))?;
            build_triangular(lx, ly)?
        }
        path if Path::new(path).is_file() => {
            if size.is_some() {
                bail!("--size does not apply to a lattice file");
            }
            read_lattice_file(path)?
        }
        other => bail!("unknown lattice {other:?}: expected a file or one of {BUILTINS}"),
    };
    Ok(lattice)
}
