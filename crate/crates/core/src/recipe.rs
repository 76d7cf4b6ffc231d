// SPDX-License-Identifier: Apache-2.0

//! Declarative experiment recipes: a list of curves, each a grammar plus a
//! length plan, run through generate → flatten → profile.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::generator::{flatten, grammar_fingerprint, Generator, LengthPlan, TOOL_VERSION};
use crate::grammar::SpkGrammar;
use crate::profiler::{ldd_profile, Estimator, LddProfile};
use crate::automaton::DEFAULT_STATE_CAP;

/// Recipes and grammar files compiled into the binary, by file name.
pub const BUNDLED_RECIPES: &[(&str, &str)] = &[
    ("fig2", include_str!("../recipes/fig2.toml")),
    ("fig3", include_str!("../recipes/fig3.toml")),
    ("fig4", include_str!("../recipes/fig4.toml")),
    ("fig5", include_str!("../recipes/fig5.toml")),
    ("fig6", include_str!("../recipes/fig6.toml")),
    ("sp16-v26", include_str!("../recipes/sp16-v26.toml")),
];

pub const BUNDLED_GRAMMARS: &[(&str, &str)] = &[
    ("sp2_abcd_ab.g", include_str!("../grammars/sp2_abcd_ab.g")),
    ("sp4_abcd.g", include_str!("../grammars/sp4_abcd.g")),
    ("sp16_abcd.g", include_str!("../grammars/sp16_abcd.g")),
    ("sp2_az_ab.g", include_str!("../grammars/sp2_az_ab.g")),
    ("sp2_abcd_ab_bc.g", include_str!("../grammars/sp2_abcd_ab_bc.g")),
    ("sp2_abcd_ab_bc_cd_dc.g", include_str!("../grammars/sp2_abcd_ab_bc_cd_dc.g")),
    ("sp16_az.g", include_str!("../grammars/sp16_az.g")),
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecipeFile {
    name: String,
    seed: u64,
    #[serde(default)]
    description: Option<String>,
    #[serde(default)]
    estimator: Option<String>,
    #[serde(default)]
    out_dir: Option<PathBuf>,
    #[serde(rename = "curve")]
    curves: Vec<CurveFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    label: String,
    grammar: PathBuf,
    min_len: usize,
    max_len: usize,
    #[serde(default)]
    count: Option<usize>,
    #[serde(default)]
    target_symbols: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    max_distance: Option<usize>,
    #[serde(default)]
    separator: Option<char>,
}

#[derive(Clone, Debug)]
pub struct Curve {
    pub label: String,
    pub grammar: SpkGrammar,
    pub plan: LengthPlan,
    pub seed: u64,
    pub max_distance: usize,
    pub separator: Option<char>,
}

#[derive(Clone, Debug)]
pub struct ExperimentRecipe {
    pub name: String,
    pub description: Option<String>,
    pub seed: u64,
    pub estimator: Estimator,
    pub out_dir: Option<PathBuf>,
    pub curves: Vec<Curve>,
}

impl ExperimentRecipe {
    /// Loads a recipe file; grammar paths are relative to the recipe's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, |grammar| {
            let full = base.join(grammar);
            fs::read_to_string(&full).map_err(|e| Error::io(full, e))
        })
    }

    pub fn bundled(name: &str) -> Option<Result<Self>> {
        let (_, text) = BUNDLED_RECIPES.iter().find(|(n, _)| *n == name)?;
        Some(Self::parse(text, |grammar| {
            let file = grammar.file_name().and_then(|f| f.to_str()).unwrap_or("");
            BUNDLED_GRAMMARS
                .iter()
                .find(|(n, _)| *n == file)
                .map(|(_, g)| g.to_string())
                .ok_or_else(|| {
                    Error::io(
                        grammar,
                        std::io::Error::new(std::io::ErrorKind::NotFound, "no bundled grammar"),
                    )
                })
        }))
    }

    /// A path to an existing file, or else the name of a bundled recipe.
    pub fn resolve(spec: &str) -> Result<Self> {
        let path = Path::new(spec);
        if path.exists() {
            return Self::load(path);
        }
        Self::bundled(spec).unwrap_or_else(|| {
            Err(Error::io(
                path,
                std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    "no such recipe file or bundled recipe",
                ),
            ))
        })
    }

    pub fn parse(text: &str, mut read_grammar: impl FnMut(&Path) -> Result<String>) -> Result<Self> {
        let file: RecipeFile = toml::from_str(text).map_err(|e| Error::Recipe(e.to_string()))?;
        if file.curves.is_empty() {
            return Err(Error::Recipe("recipe has no curves".into()));
        }
        let estimator = match &file.estimator {
            Some(s) => s.parse()?,
            None => Estimator::default(),
        };
        let mut curves = Vec::with_capacity(file.curves.len());
        for (i, c) in file.curves.into_iter().enumerate() {
            if curves.iter().any(|prev: &Curve| prev.label == c.label) {
                return Err(Error::Recipe(format!("duplicate curve label {:?}", c.label)));
            }
            if c.label.is_empty() || c.label.contains(['/', '\\']) || c.label.starts_with('.') {
                return Err(Error::Recipe(format!("bad curve label {:?}", c.label)));
            }
            let grammar: SpkGrammar = read_grammar(&c.grammar)?.parse()?;
            let plan = match (c.count, c.target_symbols) {
                (Some(n), None) => LengthPlan::new(c.min_len, c.max_len, n)?,
                (None, Some(n)) => LengthPlan::with_target_symbols(c.min_len, c.max_len, n)?,
                _ => {
                    return Err(Error::Recipe(format!(
                        "curve {:?}: give exactly one of `count` and `target_symbols`",
                        c.label
                    )))
                }
            };
            let max_distance = c.max_distance.unwrap_or(4 * c.max_len);
            if max_distance == 0 {
                return Err(Error::Recipe(format!("curve {:?}: max_distance is 0", c.label)));
            }
            curves.push(Curve {
                label: c.label,
                grammar,
                plan,
                seed: c.seed.unwrap_or(file.seed.wrapping_add(i as u64)),
                max_distance,
                separator: c.separator,
            });
        }
        Ok(ExperimentRecipe {
            name: file.name,
            description: file.description,
            seed: file.seed,
            estimator,
            out_dir: file.out_dir,
            curves,
        })
    }
}

#[derive(Clone, Debug)]
pub struct CurveResult {
    pub label: String,
    pub symbols: usize,
    pub strings: usize,
    pub profile: LddProfile,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub curves: Vec<CurveResult>,
    /// `(file name, contents)` in write order; the manifest is last.
    pub files: Vec<(String, String)>,
}

pub fn run_curve(curve: &Curve, estimator: Estimator) -> Result<CurveResult> {
    let generator = Generator::new(&curve.grammar, curve.plan.max_len(), DEFAULT_STATE_CAP)?;
    let dataset = generator.generate(&curve.plan, curve.seed)?;
    let corpus = flatten(&dataset, curve.separator)?;
    let max_distance = curve.max_distance.min(corpus.len().saturating_sub(1));
    let mut profile = ldd_profile(&corpus, max_distance, estimator)?;
    profile.corpus_id = curve.label.clone();
    Ok(CurveResult {
        label: curve.label.clone(),
        symbols: corpus.len(),
        strings: dataset.len(),
        profile,
    })
}

/// Runs every curve and renders the CSVs and manifest in memory.
pub fn run_recipe(recipe: &ExperimentRecipe) -> Result<ExperimentOutput> {
    let mut curves = Vec::with_capacity(recipe.curves.len());
    let mut files = Vec::with_capacity(recipe.curves.len() + 1);
    let mut manifest = String::new();
    let _ = writeln!(manifest, "# {TOOL_VERSION}");
    let _ = writeln!(manifest, "# recipe: {}", recipe.name);
    let _ = writeln!(manifest, "# seed: {}", recipe.seed);
    let _ = writeln!(manifest, "# estimator: {}", recipe.estimator);
    let mut listing = String::new();
    for curve in &recipe.curves {
        let result = run_curve(curve, recipe.estimator)?;
        let name = format!("{}.csv", curve.label);
        let csv = result.profile.to_csv();
        let _ = writeln!(
            manifest,
            "# {}: grammar={} plan={} seed={} strings={} symbols={} separator={} max_distance={}",
            curve.label,
            grammar_fingerprint(&curve.grammar),
            curve.plan,
            curve.seed,
            result.strings,
            result.symbols,
            curve.separator.map_or("none".to_string(), |c| format!("{c:?}")),
            result.profile.max_distance(),
        );
        let _ = writeln!(listing, "{}  {name}", sha256_hex(csv.as_bytes()));
        files.push((name, csv));
        curves.push(result);
    }
    manifest.push_str(&listing);
    files.push(("manifest.txt".to_string(), manifest));
    Ok(ExperimentOutput { curves, files })
}

/// Writes the output files into `out_dir` through a staging directory, so a
/// failed run leaves nothing behind.
pub fn write_outputs(out_dir: &Path, files: &[(String, String)]) -> Result<()> {
    let parent = match out_dir.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent).map_err(|e| Error::io(&parent, e))?;
    let stem = out_dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let staging = parent.join(format!(".{stem}.partial-{}", std::process::id()));
    let result = (|| {
        fs::create_dir_all(&staging).map_err(|e| Error::io(&staging, e))?;
        for (name, contents) in files {
            let p = staging.join(name);
            fs::write(&p, contents).map_err(|e| Error::io(p, e))?;
        }
        fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
        for (name, _) in files {
            let to = out_dir.join(name);
            fs::rename(staging.join(name), &to).map_err(|e| Error::io(to, e))?;
        }
        Ok(())
    })();
    let _ = fs::remove_dir_all(&staging);
    if result.is_err() {
        for (name, _) in files {
            let _ = fs::remove_file(out_dir.join(name));
        }
    }
    result
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
