use std::fmt;

use crate::groups::free::{self, Letter};

/// What a presentation generator stands for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorOwner {
    /// Generator of the vertex group at this vertex (index into its generators).
    Vertex(String, usize),
    /// Stable letter of the edge orbit named by its positive half-edge.
    Edge(String),
    /// Read from text; no graph attached.
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub owner: GeneratorOwner,
}

/// Finite presentation with relators stored as letter words
/// (`±(k + 1)` for generator `k`).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    pub relators: Vec<Vec<Letter>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown generator {0:?}")]
    UnknownLetter(String),
}

impl Presentation {
    pub fn from_names(names: &[&str], relators: &[&str]) -> Result<Self, PresentationError> {
        let generators = names
            .iter()
            .map(|n| Generator {
                name: n.to_string(),
                owner: GeneratorOwner::Free,
            })
            .collect();
        let mut p = Presentation {
            generators,
            relators: Vec::new(),
        };
        for r in relators {
            let w = p.parse_word(r)?;
            p.relators.push(w);
        }
        Ok(p)
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Parses space-separated generator names, each optionally suffixed `^-1`.
    pub fn parse_word(&self, s: &str) -> Result<Vec<Letter>, PresentationError> {
        let mut w = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, inverse) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let k = self
                .generator_index(name)
                .ok_or_else(|| PresentationError::UnknownLetter(name.to_string()))?;
            w.push(free::letter(k, inverse));
        }
        Ok(w)
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        free::format_word(w, &self.generator_names(), " ")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.generators {
            out.push_str(&g.name);
            out.push('\n');
        }
        out.push_str("--\n");
        for r in &self.relators {
            out.push_str(&self.format_word(r));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self, PresentationError> {
        let mut generators = Vec::new();
        let mut lines = text.lines().enumerate();
        let mut separated = false;
        for (i, line) in lines.by_ref() {
            let line = line.trim();
            if line == "--" {
                separated = true;
                break;
            }
            if line.is_empty() {
                continue;
            }
            if line.contains(char::is_whitespace) || line.ends_with("^-1") {
                return Err(PresentationError::Syntax {
                    line: i + 1,
                    msg: format!("bad generator name {line:?}"),
                });
            }
            generators.push(Generator {
                name: line.to_string(),
                owner: GeneratorOwner::Free,
            });
        }
        if !separated {
            return Err(PresentationError::Syntax {
                line: text.lines().count(),
                msg: "missing `--` separator".into(),
            });
        }
        let mut p = Presentation {
            generators,
            relators: Vec::new(),
        };
        for (_, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let w = p.parse_word(line)?;
            p.relators.push(w);
        }
        Ok(p)
    }

    /// Relators with the canonical sort used for multiset comparisons.
    pub fn sorted_relators(&self) -> Vec<Vec<Letter>> {
        let mut r = self.relators.clone();
        r.sort();
        r
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let p = Presentation::from_names(&["a", "t"], &["t a t^-1 a^-1"]).unwrap();
        let text = p.to_text();
        assert_eq!(text, "a\nt\n--\nt a t^-1 a^-1\n");
        assert_eq!(Presentation::parse_text(&text).unwrap(), p);
    }

    #[test]
    fn unknown_letter() {
        let p = Presentation::from_names(&["a"], &[]).unwrap();
        assert_eq!(p.parse_word("a b"), Err(PresentationError::UnknownLetter("b".into())));
        assert!(Presentation::parse_text("a\nb\n").is_err());
    }
}
