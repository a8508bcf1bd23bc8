//! Text form of decision trees.
//!
//! ```text
//! tree := image-name | "(" "P" <sign> tree tree ")"
//! ```
//!
//! The first subtree is the true branch. Formatting is canonical: single
//! spaces, no trailing whitespace.

use crate::error::{Error, Result};
use crate::patterns::Universe;

use super::DecisionTree;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token<'a> {
    Open,
    Close,
    Word(&'a str),
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Next token and the byte offset where it starts.
    fn next(&mut self) -> Option<(usize, Token<'a>)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let c = rest.chars().next()?;
        match c {
            '(' => {
                self.pos += 1;
                Some((start, Token::Open))
            }
            ')' => {
                self.pos += 1;
                Some((start, Token::Close))
            }
            _ => {
                let len = rest
                    .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
                    .unwrap_or(rest.len());
                self.pos += len;
                Some((start, Token::Word(&rest[..len])))
            }
        }
    }
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

struct Parser<'a, F> {
    lexer: Lexer<'a>,
    sign_count: usize,
    resolve: F,
}

impl<F: Fn(&str) -> Option<usize>> Parser<'_, F> {
    fn tree(&mut self) -> Result<DecisionTree> {
        let end = self.lexer.text.len();
        match self.lexer.next() {
            None => Err(syntax(end, "unexpected end of input")),
            Some((pos, Token::Close)) => Err(syntax(pos, "unexpected `)`")),
            Some((pos, Token::Word(name))) => (self.resolve)(name)
                .map(DecisionTree::Leaf)
                .ok_or_else(|| syntax(pos, format!("unknown image name `{name}`"))),
            Some((_, Token::Open)) => {
                let sign = match self.lexer.next() {
                    Some((pos, Token::Word(w))) => self.sign(pos, w)?,
                    Some((pos, _)) => return Err(syntax(pos, "expected a sign `P<k>`")),
                    None => return Err(syntax(end, "unexpected end of input")),
                };
                let on_true = self.tree()?;
                let on_false = self.tree()?;
                match self.lexer.next() {
                    Some((_, Token::Close)) => Ok(DecisionTree::test(sign, on_true, on_false)),
                    Some((pos, _)) => Err(syntax(pos, "expected `)` after two subtrees")),
                    None => Err(syntax(end, "missing `)`")),
                }
            }
        }
    }

    fn sign(&self, pos: usize, word: &str) -> Result<usize> {
        let k = word
            .strip_prefix('P')
            .and_then(|d| d.parse::<usize>().ok())
            .ok_or_else(|| syntax(pos, format!("expected a sign `P<k>`, found `{word}`")))?;
        if k == 0 || k > self.sign_count {
            return Err(syntax(
                pos,
                format!("sign index {k} outside 1..={}", self.sign_count),
            ));
        }
        Ok(k)
    }
}

/// Parses a tree with a custom image-name resolver.
pub fn parse_tree_with<F>(text: &str, sign_count: usize, resolve: F) -> Result<DecisionTree>
where
    F: Fn(&str) -> Option<usize>,
{
    let mut parser = Parser {
        lexer: Lexer::new(text),
        sign_count,
        resolve,
    };
    let tree = parser.tree()?;
    if let Some((pos, _)) = parser.lexer.next() {
        return Err(syntax(pos, "trailing input after tree"));
    }
    Ok(tree)
}

/// Parses a tree, resolving leaf names and checking sign indices against `u`.
pub fn parse_tree(text: &str, u: &Universe) -> Result<DecisionTree> {
    parse_tree_with(text, u.sign_count(), |name| u.image_index(name))
}

/// Canonical text of `tree`, naming leaves after `u`'s images.
pub fn format_tree(tree: &DecisionTree, u: &Universe) -> String {
    fn write(tree: &DecisionTree, u: &Universe, out: &mut String) {
        match tree {
            DecisionTree::Leaf(i) => match u.image(*i) {
                Some(def) => out.push_str(&def.name),
                None => out.push_str(&format!("#{i}")),
            },
            DecisionTree::Test {
                sign,
                on_true,
                on_false,
            } => {
                out.push_str(&format!("(P{sign} "));
                write(on_true, u, out);
                out.push(' ');
                write(on_false, u, out);
                out.push(')');
            }
        }
    }
    let mut out = String::new();
    write(tree, u, &mut out);
    out
}

/// A tree read from a tree file, with an optional `label=` prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTree {
    pub label: Option<String>,
    pub tree: DecisionTree,
}

/// Parses one `[label=]tree` entry.
pub fn parse_labeled(text: &str, u: &Universe) -> Result<LabeledTree> {
    match text.split_once('=') {
        Some((label, dsl)) => {
            let offset = label.len() + 1;
            let tree = parse_tree(dsl, u).map_err(|e| match e {
                Error::Syntax { position, message } => Error::Syntax {
                    position: position + offset,
                    message,
                },
                other => other,
            })?;
            Ok(LabeledTree {
                label: Some(label.trim().to_string()),
                tree,
            })
        }
        None => Ok(LabeledTree {
            label: None,
            tree: parse_tree(text, u)?,
        }),
    }
}

/// One `[label=]tree` per line; blank lines and `#` comments are skipped.
pub fn parse_tree_file(text: &str, u: &Universe) -> Result<Vec<LabeledTree>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let l = l.trim();
            !l.is_empty() && !l.starts_with('#')
        })
        .map(|(i, l)| {
            parse_labeled(l.trim(), u).map_err(|e| Error::format(format!("line {}: {e}", i + 1)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::theorem1_universe;
    use crate::recognizers::builtin;

    #[test]
    fn parses_the_builtins() {
        let u = theorem1_universe();
        assert_eq!(
            parse_tree("(P1 a0 (P2 a1 (P3 a2 a3)))", &u).unwrap(),
            builtin::algorithm_a()
        );
        assert_eq!(
            parse_tree("(P2 (P1 a0 a1) (P1 a0 (P4 a2 a3)))", &u).unwrap(),
            builtin::split_then_peel()
        );
        assert_eq!(parse_tree("a3", &u).unwrap(), DecisionTree::leaf(3));
    }

    #[test]
    fn formatting_is_canonical() {
        let u = theorem1_universe();
        let t = parse_tree("  ( P4\n a2 (P5 a0(P6 a1 a3) ) )  ", &u).unwrap();
        assert_eq!(format_tree(&t, &u), "(P4 a2 (P5 a0 (P6 a1 a3)))");
    }

    #[test]
    fn errors_carry_positions() {
        let u = theorem1_universe();
        let cases = [
            ("(P1 a0 zz)", 7),
            ("(P10 a0 a1)", 1),
            ("(Q1 a0 a1)", 1),
            ("(P1 a0)", 6),
            ("(P1 a0 a1", 9),
            ("(P1 a0 a1) a2", 11),
            (")", 0),
            ("", 0),
        ];
        for (text, want) in cases {
            match parse_tree(text, &u) {
                Err(Error::Syntax { position, .. }) => assert_eq!(position, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn tree_files_with_labels() {
        let u = theorem1_universe();
        let text = "# recognizers\nA=(P1 a0 (P2 a1 (P3 a2 a3)))\n\n(P4 a2 (P5 a0 (P6 a1 a3)))\n";
        let trees = parse_tree_file(text, &u).unwrap();
        assert_eq!(trees.len(), 2);
        assert_eq!(trees[0].label.as_deref(), Some("A"));
        assert_eq!(trees[1].label, None);
        assert_eq!(trees[1].tree, builtin::algorithm_b());
        assert!(parse_tree_file("A=(P1 a0\n", &u).is_err());
    }
}
