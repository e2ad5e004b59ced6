//! A miniature diagram language: trees of named generators under
//! sequential and parallel composition, written as s-expressions and
//! evaluated against an environment of bound linear maps.
//!
//! `(seq upper lower)` runs `lower` first and feeds it into `upper`,
//! matching the convention of reading a diagram upward from the bottom.
//! `(par left right)` places two diagrams side by side as a tensor
//! product. Wire crossings are explicit `(swap a b)` nodes, and the
//! bent-wire abbreviations for matrix algebras are available as bindings
//! `cap_n` / `cup_n` on request.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use thiserror::Error;

use crate::linalg::LinearMap;
use crate::scalar::Scalar;

/// Errors from parsing or evaluating diagrams.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorNetError {
    /// The text does not match the grammar.
    #[error("syntax error at line {line}, column {col}: {detail}")]
    SyntaxError {
        line: usize,
        col: usize,
        detail: String,
    },

    /// A head word that is not one of the six forms.
    #[error("unknown form '{name}' at line {line}, column {col}")]
    UnknownForm {
        name: String,
        line: usize,
        col: usize,
    },

    /// A generator with no binding in the environment.
    #[error("generator '{name}' is not bound (at {path})")]
    UnboundGenerator { name: String, path: String },

    /// Composition of incompatible shapes, located by subterm path.
    #[error("shape mismatch at {path}: {detail}")]
    DimensionMismatch { path: String, detail: String },
}

/// A diagram: the syntax tree of a composite map.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagram {
    /// A named box, resolved through the environment.
    Generator(String),
    /// Vertical composition; `lower` runs first.
    Seq {
        upper: Box<Diagram>,
        lower: Box<Diagram>,
    },
    /// Horizontal composition, evaluated as a tensor product.
    Par {
        left: Box<Diagram>,
        right: Box<Diagram>,
    },
    /// A complex constant as a 1x1 map; `(scalar 1 0)` is the empty
    /// diagram.
    Scalar(f64, f64),
    /// The identity on a wire of the given dimension.
    Id(usize),
    /// The wire crossing `|i j> -> |j i>`.
    Swap(usize, usize),
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagram::Generator(name) => write!(f, "(gen {name})"),
            Diagram::Seq { upper, lower } => write!(f, "(seq {upper} {lower})"),
            Diagram::Par { left, right } => write!(f, "(par {left} {right})"),
            Diagram::Scalar(re, im) => write!(f, "(scalar {re:?} {im:?})"),
            Diagram::Id(n) => write!(f, "(id {n})"),
            Diagram::Swap(a, b) => write!(f, "(swap {a} {b})"),
        }
    }
}

/// Name-to-map bindings used to evaluate generators.
#[derive(Debug, Clone)]
pub struct Environment<T> {
    bindings: BTreeMap<String, LinearMap<T>>,
}

impl<T: Scalar> Default for Environment<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> Environment<T> {
    /// An empty environment.
    pub fn new() -> Self {
        Self {
            bindings: BTreeMap::new(),
        }
    }

    /// Chainable binding.
    pub fn with(mut self, name: impl Into<String>, map: LinearMap<T>) -> Self {
        self.bindings.insert(name.into(), map);
        self
    }

    /// In-place binding.
    pub fn bind(&mut self, name: impl Into<String>, map: LinearMap<T>) {
        self.bindings.insert(name.into(), map);
    }

    /// Looks a name up.
    pub fn get(&self, name: &str) -> Option<&LinearMap<T>> {
        self.bindings.get(name)
    }

    /// Adds the bent-wire pair for an `n`-dimensional matrix block:
    /// `cap_n` is the vectorized identity as a state, `cup_n` its
    /// adjoint effect.
    pub fn with_matrix_caps(self, n: usize) -> Self {
        let cap = LinearMap::identity(n).name().expect("identity is square");
        let cup = cap.adjoint();
        self.with(format!("cap_{n}"), cap)
            .with(format!("cup_{n}"), cup)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    LParen,
    RParen,
    Word(String),
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut word = String::new();
    let mut word_start = (1, 1);
    let flush = |word: &mut String, start: (usize, usize), tokens: &mut Vec<Token>| {
        if !word.is_empty() {
            tokens.push(Token {
                kind: TokenKind::Word(std::mem::take(word)),
                line: start.0,
                col: start.1,
            });
        }
    };
    for ch in text.chars() {
        match ch {
            '(' | ')' => {
                flush(&mut word, word_start, &mut tokens);
                tokens.push(Token {
                    kind: if ch == '(' {
                        TokenKind::LParen
                    } else {
                        TokenKind::RParen
                    },
                    line,
                    col,
                });
                col += 1;
            }
            '\n' => {
                flush(&mut word, word_start, &mut tokens);
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                flush(&mut word, word_start, &mut tokens);
                col += 1;
            }
            c => {
                if word.is_empty() {
                    word_start = (line, col);
                }
                word.push(c);
                col += 1;
            }
        }
    }
    flush(&mut word, word_start, &mut tokens);
    tokens
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn error_at(&self, detail: impl Into<String>) -> TensorNetError {
        let (line, col) = self
            .tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1));
        TensorNetError::SyntaxError {
            line,
            col,
            detail: detail.into(),
        }
    }

    fn next(&mut self, expected: &str) -> Result<Token, TensorNetError> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(self.error_at(format!("unexpected end of input, expected {expected}"))),
        }
    }

    fn word(&mut self, expected: &str) -> Result<(String, usize, usize), TensorNetError> {
        let t = self.next(expected)?;
        match t.kind {
            TokenKind::Word(w) => Ok((w, t.line, t.col)),
            _ => {
                self.pos -= 1;
                Err(self.error_at(format!("expected {expected}")))
            }
        }
    }

    fn integer(&mut self, what: &str) -> Result<usize, TensorNetError> {
        let (w, line, col) = self.word(what)?;
        let n: usize = w.parse().map_err(|_| TensorNetError::SyntaxError {
            line,
            col,
            detail: format!("expected a nonnegative integer for {what}, got '{w}'"),
        })?;
        if n == 0 {
            return Err(TensorNetError::SyntaxError {
                line,
                col,
                detail: format!("{what} must be positive"),
            });
        }
        Ok(n)
    }

    fn float(&mut self, what: &str) -> Result<f64, TensorNetError> {
        let (w, line, col) = self.word(what)?;
        w.parse().map_err(|_| TensorNetError::SyntaxError {
            line,
            col,
            detail: format!("expected a number for {what}, got '{w}'"),
        })
    }

    fn close(&mut self) -> Result<(), TensorNetError> {
        let t = self.next("')'")?;
        if t.kind == TokenKind::RParen {
            Ok(())
        } else {
            self.pos -= 1;
            Err(self.error_at("expected ')'"))
        }
    }

    fn expr(&mut self) -> Result<Diagram, TensorNetError> {
        let open = self.next("'('")?;
        if open.kind != TokenKind::LParen {
            self.pos -= 1;
            return Err(self.error_at("expected '('"));
        }
        let (head, line, col) = self.word("a form name")?;
        let node = match head.as_str() {
            "seq" => {
                let upper = self.expr()?;
                let lower = self.expr()?;
                Diagram::Seq {
                    upper: Box::new(upper),
                    lower: Box::new(lower),
                }
            }
            "par" => {
                let left = self.expr()?;
                let right = self.expr()?;
                Diagram::Par {
                    left: Box::new(left),
                    right: Box::new(right),
                }
            }
            "gen" => {
                let (name, nline, ncol) = self.word("a generator name")?;
                let valid = name
                    .chars()
                    .next()
                    .map(|c| c.is_ascii_alphabetic() || c == '_')
                    .unwrap_or(false)
                    && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                if !valid {
                    return Err(TensorNetError::SyntaxError {
                        line: nline,
                        col: ncol,
                        detail: format!("'{name}' is not a valid generator name"),
                    });
                }
                Diagram::Generator(name)
            }
            "id" => Diagram::Id(self.integer("the wire dimension")?),
            "swap" => {
                let a = self.integer("the first wire dimension")?;
                let b = self.integer("the second wire dimension")?;
                Diagram::Swap(a, b)
            }
            "scalar" => {
                let re = self.float("the real part")?;
                let im = self.float("the imaginary part")?;
                Diagram::Scalar(re, im)
            }
            _ => {
                return Err(TensorNetError::UnknownForm {
                    name: head,
                    line,
                    col,
                })
            }
        };
        self.close()?;
        Ok(node)
    }
}

/// Parses one s-expression into a diagram.
pub fn parse(text: &str) -> Result<Diagram, TensorNetError> {
    let mut parser = Parser {
        tokens: tokenize(text),
        pos: 0,
    };
    let d = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error_at("trailing input after the diagram"));
    }
    Ok(d)
}

/// Evaluates a diagram against an environment by structural fold:
/// generators look up their binding, `seq` composes, `par` tensors.
pub fn evaluate<T: Scalar>(
    diagram: &Diagram,
    env: &Environment<T>,
) -> Result<LinearMap<T>, TensorNetError> {
    let mut path = Vec::new();
    eval_at(diagram, env, &mut path)
}

fn path_string(path: &[&'static str]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.join(".")
    }
}

fn eval_at<T: Scalar>(
    diagram: &Diagram,
    env: &Environment<T>,
    path: &mut Vec<&'static str>,
) -> Result<LinearMap<T>, TensorNetError> {
    match diagram {
        Diagram::Generator(name) => {
            env.get(name)
                .cloned()
                .ok_or_else(|| TensorNetError::UnboundGenerator {
                    name: name.clone(),
                    path: path_string(path),
                })
        }
        Diagram::Seq { upper, lower } => {
            path.push("upper");
            let up = eval_at(upper, env, path)?;
            path.pop();
            path.push("lower");
            let low = eval_at(lower, env, path)?;
            path.pop();
            up.compose(&low)
                .map_err(|e| TensorNetError::DimensionMismatch {
                    path: path_string(path),
                    detail: e.to_string(),
                })
        }
        Diagram::Par { left, right } => {
            path.push("left");
            let l = eval_at(left, env, path)?;
            path.pop();
            path.push("right");
            let r = eval_at(right, env, path)?;
            path.pop();
            Ok(l.tensor(&r))
        }
        Diagram::Scalar(re, im) => Ok(LinearMap::scalar(Complex::new(
            T::from_f64_lossy(*re),
            T::from_f64_lossy(*im),
        ))),
        Diagram::Id(n) => Ok(LinearMap::identity(*n)),
        Diagram::Swap(a, b) => Ok(LinearMap::swap(*a, *b)),
    }
}

/// Whether two diagrams evaluate to the same map at the tolerance.
pub fn diagrams_equal<T: Scalar>(
    d1: &Diagram,
    d2: &Diagram,
    env: &Environment<T>,
    tol: T,
) -> Result<bool, TensorNetError> {
    let a = evaluate(d1, env)?;
    let b = evaluate(d2, env)?;
    Ok(a.approx_eq(&b, tol))
}
