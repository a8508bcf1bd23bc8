use std::fs;

use nontrans_core::patterns::{theorem1_universe, theorem2_universe, Universe};
use nontrans_core::recognizers::{builtin, parse_labeled, parse_tree_file, spine_algorithm};
use nontrans_core::tournament::Entrant;

use crate::Failure;

/// A resolved universe plus the text it was requested with.
pub struct Source {
    pub spec: String,
    pub universe: Universe,
    /// `Some(n)` when the universe is the cyclic family of width `n`.
    pub family: Option<usize>,
}

pub fn load_universe(spec: &str) -> Result<Source, Failure> {
    if spec == "theorem1" {
        return Ok(Source {
            spec: spec.to_string(),
            universe: theorem1_universe(),
            family: Some(3),
        });
    }
    if let Some(n) = spec.strip_prefix("theorem2:") {
        let n: usize = n
            .parse()
            .map_err(|_| Failure::Usage(format!("bad family size in {spec:?}")))?;
        return Ok(Source {
            spec: spec.to_string(),
            universe: theorem2_universe(n)?,
            family: Some(n),
        });
    }
    let text = fs::read_to_string(spec)
        .map_err(|e| Failure::Usage(format!("cannot read universe file {spec}: {e}")))?;
    Ok(Source {
        spec: spec.to_string(),
        universe: Universe::from_text(&text)?,
        family: None,
    })
}

/// Builtin names: `A`, `B`, `C`, `C-misprinted`, `split-peel`, `split-separate` on the
/// 25-pattern universe, and spines `A0`..`A{n-1}` on a cyclic family.
fn builtin_tree(name: &str, source: &Source) -> Result<Entrant, Failure> {
    let spine = name.strip_prefix('A').and_then(|q| q.parse::<usize>().ok());
    let tree = match (spine, source.family) {
        (Some(q), Some(n)) if q < n => spine_algorithm(n, q)?,
        _ => builtin::by_name(name).ok_or_else(|| {
            Failure::Usage(format!(
                "unknown builtin {name:?}; expected one of {} or a spine A<q>",
                builtin::NAMES.join(", ")
            ))
        })?,
    };
    tree.validate(&source.universe).map_err(|e| {
        Failure::Usage(format!(
            "builtin {name} does not fit universe {}: {e}",
            source.spec
        ))
    })?;
    Ok(Entrant::new(name, tree))
}

/// Trees from `--trees` names first, then each `--tree` argument in order.
pub fn load_trees(
    source: &Source,
    names: &[String],
    trees: &[String],
) -> Result<Vec<Entrant>, Failure> {
    let mut out = Vec::new();
    for name in names {
        out.push(builtin_tree(name.trim(), source)?);
    }
    for arg in trees {
        if let Some(path) = arg.strip_prefix('@') {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read tree file {path}: {e}")))?;
            for (k, t) in parse_tree_file(&text, &source.universe)?
                .into_iter()
                .enumerate()
            {
                let label = t.label.unwrap_or_else(|| format!("{path}:{}", k + 1));
                out.push(Entrant::new(label, t.tree));
            }
        } else {
            let t = parse_labeled(arg, &source.universe)?;
            let label = t.label.unwrap_or_else(|| format!("T{}", out.len() + 1));
            out.push(Entrant::new(label, t.tree));
        }
    }
    Ok(out)
}
