//! Monomial presentations of commutative monoids.
//!
//! A [`Presentation`] is a list of named generators together with at most a
//! handful of relations `lhs = rhs` between [`Word`]s of the free commutative
//! monoid on those generators. [`normalize`] brings a parsed presentation into
//! the shape the normality criteria expect and records every rewriting step in
//! a [`Trail`] so results can be reported against the user's generators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate generator `{name}` at line {line}, column {column}")]
    DuplicateGenerator { name: String, line: usize, column: usize },
    #[error("unknown generator `{name}` at line {line}, column {column}")]
    UnknownGenerator { name: String, line: usize, column: usize },
    #[error("empty relation side at line {line}, column {column}")]
    EmptySide { line: usize, column: usize },
    #[error("zero exponent at line {line}, column {column}")]
    ZeroExponent { line: usize, column: usize },
    #[error("generator index {index} out of range for {count} generators")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("exponent arithmetic overflowed")]
    Overflow,
    #[error("{count} relations remain after reduction; at most two are supported")]
    NotSupported { count: usize },
}

/// An element of the free commutative monoid: generator index ↦ exponent.
/// Zero exponents are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    exponents: BTreeMap<usize, u64>,
}

impl Word {
    pub fn one() -> Self {
        Word::default()
    }

    pub fn generator(index: usize) -> Self {
        Word::from_pairs([(index, 1)])
    }

    /// Pairs with a zero exponent are skipped; repeated indices accumulate.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u64)>) -> Self {
        let mut exponents = BTreeMap::new();
        for (g, e) in pairs {
            if e > 0 {
                *exponents.entry(g).or_insert(0) += e;
            }
        }
        Word { exponents }
    }

    /// From a dense exponent vector indexed by generator.
    pub fn from_dense(exponents: &[u64]) -> Self {
        Word::from_pairs(exponents.iter().copied().enumerate())
    }

    pub fn to_dense(&self, generators: usize) -> Vec<u64> {
        let mut v = vec![0; generators];
        for (&g, &e) in &self.exponents {
            v[g] = e;
        }
        v
    }

    pub fn exponent(&self, generator: usize) -> u64 {
        self.exponents.get(&generator).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.exponents.iter().map(|(&g, &e)| (g, e))
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.exponents.values().sum()
    }

    /// `supp(w)`: generators occurring in the word.
    pub fn support(&self) -> BTreeSet<usize> {
        self.exponents.keys().copied().collect()
    }

    /// `Hsupp(w)`: generators occurring with exponent greater than one.
    pub fn hsupp(&self) -> BTreeSet<usize> {
        self.iter().filter(|&(_, e)| e > 1).map(|(g, _)| g).collect()
    }

    pub fn is_squarefree(&self) -> bool {
        self.exponents.values().all(|&e| e == 1)
    }

    /// The squarefree radical: every generator of the support once.
    pub fn radical(&self) -> Word {
        Word::from_pairs(self.exponents.keys().map(|&g| (g, 1)))
    }

    /// `Some(g)` when the word is exactly the generator `g` to the first power.
    pub fn as_single_generator(&self) -> Option<usize> {
        match self.exponents.iter().next() {
            Some((&g, &1)) if self.exponents.len() == 1 => Some(g),
            _ => None,
        }
    }

    pub fn divides(&self, other: &Word) -> bool {
        self.iter().all(|(g, e)| other.exponent(g) >= e)
    }

    pub fn checked_mul(&self, other: &Word) -> Result<Word, PresentationError> {
        let mut exponents = self.exponents.clone();
        for (g, e) in other.iter() {
            let slot = exponents.entry(g).or_insert(0);
            *slot = slot.checked_add(e).ok_or(PresentationError::Overflow)?;
        }
        Ok(Word { exponents })
    }

    pub fn checked_pow(&self, power: u64) -> Result<Word, PresentationError> {
        let mut exponents = BTreeMap::new();
        for (g, e) in self.iter() {
            let e = e.checked_mul(power).ok_or(PresentationError::Overflow)?;
            if e > 0 {
                exponents.insert(g, e);
            }
        }
        Ok(Word { exponents })
    }

    /// Removes a generator entirely, returning its exponent.
    fn take(&mut self, generator: usize) -> u64 {
        self.exponents.remove(&generator).unwrap_or(0)
    }

    fn reduce_by(&mut self, generator: usize, amount: u64) {
        if let Some(e) = self.exponents.get_mut(&generator) {
            *e -= amount;
            if *e == 0 {
                self.exponents.remove(&generator);
            }
        }
    }

    fn remap(&self, map: &BTreeMap<usize, usize>) -> Word {
        Word::from_pairs(self.iter().map(|(g, e)| (map[&g], e)))
    }

    /// Renders the word with generator names, e.g. `a b^2`; the empty word is `1`.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.iter()
            .map(|(g, e)| {
                if e == 1 {
                    names[g].clone()
                } else {
                    format!("{}^{e}", names[g])
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        Relation { lhs, rhs }
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.lhs.support().union(&self.rhs.support()).copied().collect()
    }

    /// `lhs - rhs` as a dense integer vector.
    pub fn difference(&self, generators: usize) -> Vec<i128> {
        let mut v = vec![0i128; generators];
        for (g, e) in self.lhs.iter() {
            v[g] += e as i128;
        }
        for (g, e) in self.rhs.iter() {
            v[g] -= e as i128;
        }
        v
    }

    pub fn swapped(&self) -> Relation {
        Relation::new(self.rhs.clone(), self.lhs.clone())
    }

    pub fn render(&self, names: &[String]) -> String {
        format!("{} = {}", self.lhs.render(names), self.rhs.render(names))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    generators: Vec<String>,
    relations: Vec<Relation>,
    normalized: bool,
}

impl Presentation {
    /// Validates name uniqueness, generator indices and nonempty sides.
    pub fn new(generators: Vec<String>, relations: Vec<Relation>) -> Result<Self, PresentationError> {
        let mut seen = BTreeSet::new();
        for name in &generators {
            if !seen.insert(name.as_str()) {
                return Err(PresentationError::DuplicateGenerator {
                    name: name.clone(),
                    line: 0,
                    column: 0,
                });
            }
        }
        for r in &relations {
            if r.lhs.is_one() || r.rhs.is_one() {
                return Err(PresentationError::EmptySide { line: 0, column: 0 });
            }
            if let Some(index) = r.support().into_iter().find(|&g| g >= generators.len()) {
                return Err(PresentationError::GeneratorOutOfRange {
                    index,
                    count: generators.len(),
                });
            }
        }
        Ok(Presentation {
            generators,
            relations,
            normalized: false,
        })
    }

    /// Generators named `u1, u2, …`.
    pub fn with_indexed_names(count: usize, relations: Vec<Relation>) -> Result<Self, PresentationError> {
        Self::new((1..=count).map(|i| format!("u{i}")).collect(), relations)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Generators that occur in some relation.
    pub fn relation_support(&self) -> BTreeSet<usize> {
        self.relations.iter().flat_map(Relation::support).collect()
    }

    /// Generators outside every relation; they split off as a free factor.
    pub fn free_generators(&self) -> Vec<usize> {
        let used = self.relation_support();
        (0..self.generators.len()).filter(|g| !used.contains(g)).collect()
    }

    /// Sub-presentation on `generators` (in the given order) with the given
    /// relations, which must only involve those generators.
    pub fn restrict(&self, generators: &[usize], relations: &[usize]) -> Presentation {
        let map: BTreeMap<usize, usize> = generators.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let relations = relations
            .iter()
            .map(|&r| {
                let rel = &self.relations[r];
                Relation::new(rel.lhs.remap(&map), rel.rhs.remap(&map))
            })
            .collect();
        Presentation {
            generators: generators.iter().map(|&g| self.generators[g].clone()).collect(),
            relations,
            normalized: self.normalized,
        }
    }

    /// Canonical text form, accepted by [`parse_presentation`].
    pub fn to_text(&self) -> String {
        let mut out = format!("gens: {}\n", self.generators.join(" "));
        for r in &self.relations {
            out.push_str(&format!("rel: {}\n", r.render(&self.generators)));
        }
        out
    }

    /// Single-line form `a b c | a b = c^2 ; …`.
    pub fn to_inline(&self) -> String {
        let rels: Vec<String> = self.relations.iter().map(|r| r.render(&self.generators)).collect();
        if rels.is_empty() {
            self.generators.join(" ")
        } else {
            format!("{} | {}", self.generators.join(" "), rels.join(" ; "))
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relations.iter().map(|r| r.render(&self.generators)).collect();
        write!(f, "<{} | {}>", self.generators.join(", "), rels.join(", "))
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Name(String),
    Int(u64),
    Caret,
    Equals,
    Colon,
    Pipe,
    Semicolon,
}

#[derive(Clone, Debug)]
struct Spanned {
    token: Token,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> PresentationError {
    PresentationError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Spanned>, PresentationError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let simple = match c {
            '^' => Some(Token::Caret),
            '=' => Some(Token::Equals),
            ':' => Some(Token::Colon),
            '|' => Some(Token::Pipe),
            ';' => Some(Token::Semicolon),
            _ => None,
        };
        if let Some(token) = simple {
            out.push(Spanned { token, line, column });
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            out.push(Spanned {
                token: Token::Name(name),
                line,
                column,
            });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let value = digits
                .parse::<u64>()
                .map_err(|_| syntax(line, column, format!("integer `{digits}` out of range")))?;
            out.push(Spanned {
                token: Token::Int(value),
                line,
                column,
            });
        } else {
            return Err(syntax(line, column, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    tokens: &'a [Spanned],
    pos: usize,
    /// Position reported when input runs out.
    end: (usize, usize),
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Spanned> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.column)).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&'a Spanned> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }
}

fn parse_side(cursor: &mut Cursor<'_>, names: &BTreeMap<String, usize>) -> Result<Word, PresentationError> {
    let (line, column) = cursor.here();
    let mut pairs = Vec::new();
    while let Some(Spanned {
        token: Token::Name(name),
        line: l,
        column: c,
    }) = cursor.peek()
    {
        cursor.bump();
        let g = *names.get(name).ok_or_else(|| PresentationError::UnknownGenerator {
            name: name.clone(),
            line: *l,
            column: *c,
        })?;
        let mut exponent = 1;
        if let Some(Spanned {
            token: Token::Caret, ..
        }) = cursor.peek()
        {
            cursor.bump();
            match cursor.bump() {
                Some(Spanned {
                    token: Token::Int(0),
                    line,
                    column,
                }) => {
                    return Err(PresentationError::ZeroExponent {
                        line: *line,
                        column: *column,
                    })
                }
                Some(Spanned {
                    token: Token::Int(e), ..
                }) => exponent = *e,
                _ => {
                    let (l, c) = cursor
                        .tokens
                        .get(cursor.pos - 1)
                        .map(|t| (t.line, t.column))
                        .unwrap_or(cursor.end);
                    return Err(syntax(l, c, "expected a positive exponent after `^`"));
                }
            }
        }
        pairs.push((g, exponent));
    }
    if pairs.is_empty() {
        return Err(PresentationError::EmptySide { line, column });
    }
    let mut word = Word::one();
    for (g, e) in pairs {
        word = word.checked_mul(&Word::from_pairs([(g, e)]))?;
    }
    Ok(word)
}

fn parse_relation(cursor: &mut Cursor<'_>, names: &BTreeMap<String, usize>) -> Result<Relation, PresentationError> {
    let lhs = parse_side(cursor, names)?;
    match cursor.bump() {
        Some(Spanned {
            token: Token::Equals, ..
        }) => {}
        Some(t) => return Err(syntax(t.line, t.column, "expected `=`")),
        None => return Err(syntax(cursor.end.0, cursor.end.1, "expected `=`")),
    }
    let rhs = parse_side(cursor, names)?;
    Ok(Relation::new(lhs, rhs))
}

fn parse_generators(
    cursor: &mut Cursor<'_>,
    stop: Option<Token>,
) -> Result<(Vec<String>, BTreeMap<String, usize>), PresentationError> {
    let mut generators = Vec::new();
    let mut names = BTreeMap::new();
    while let Some(t) = cursor.peek() {
        match &t.token {
            Token::Name(name) => {
                if names.insert(name.clone(), generators.len()).is_some() {
                    return Err(PresentationError::DuplicateGenerator {
                        name: name.clone(),
                        line: t.line,
                        column: t.column,
                    });
                }
                generators.push(name.clone());
                cursor.bump();
            }
            tok if Some(tok) == stop.as_ref() => break,
            _ => return Err(syntax(t.line, t.column, "expected a generator name")),
        }
    }
    if generators.is_empty() {
        let (l, c) = cursor.here();
        return Err(syntax(l, c, "expected at least one generator"));
    }
    Ok((generators, names))
}

fn expect_keyword(cursor: &mut Cursor<'_>, keyword: &str) -> Result<(), PresentationError> {
    let (l, c) = cursor.here();
    match (cursor.bump(), cursor.bump()) {
        (
            Some(Spanned {
                token: Token::Name(k), ..
            }),
            Some(Spanned {
                token: Token::Colon, ..
            }),
        ) if k == keyword => Ok(()),
        _ => Err(syntax(l, c, format!("expected `{keyword}:`"))),
    }
}

fn expect_end(cursor: &Cursor<'_>) -> Result<(), PresentationError> {
    match cursor.peek() {
        None => Ok(()),
        Some(t) => Err(syntax(t.line, t.column, "unexpected trailing input")),
    }
}

/// Parses either the line-oriented file format
///
/// ```text
/// gens: a b c
/// rel: a b = c^2
/// ```
///
/// or the one-line form `a b c | a b = c^2 ; …`. Blank lines and lines
/// starting with `#` are ignored in the file format.
pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let is_file = text
        .lines()
        .any(|l| l.trim_start().starts_with("gens:") || l.trim_start().starts_with("gens :"));
    if is_file {
        parse_file(text)
    } else {
        parse_inline(text)
    }
}

fn parse_file(text: &str) -> Result<Presentation, PresentationError> {
    let mut generators: Option<(Vec<String>, BTreeMap<String, usize>)> = None;
    let mut relations = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens = tokenize(raw, line)?;
        let mut cursor = Cursor {
            tokens: &tokens,
            pos: 0,
            end: (line, raw.chars().count() + 1),
        };
        match &generators {
            None => {
                expect_keyword(&mut cursor, "gens")?;
                generators = Some(parse_generators(&mut cursor, None)?);
            }
            Some((_, names)) => {
                expect_keyword(&mut cursor, "rel")?;
                relations.push(parse_relation(&mut cursor, names)?);
                expect_end(&cursor)?;
            }
        }
    }
    let (generators, _) = generators.ok_or_else(|| syntax(1, 1, "missing `gens:` line"))?;
    Ok(Presentation {
        generators,
        relations,
        normalized: false,
    })
}

fn parse_inline(text: &str) -> Result<Presentation, PresentationError> {
    let text = text.trim_end_matches(['\n', '\r']);
    if text.contains('\n') {
        return Err(syntax(1, 1, "expected `gens:` line or a one-line presentation"));
    }
    let tokens = tokenize(text, 1)?;
    let mut cursor = Cursor {
        tokens: &tokens,
        pos: 0,
        end: (1, text.chars().count() + 1),
    };
    let (generators, names) = parse_generators(&mut cursor, Some(Token::Pipe))?;
    let mut relations = Vec::new();
    if cursor.peek().is_some() {
        cursor.bump(); // the pipe
        loop {
            relations.push(parse_relation(&mut cursor, &names)?);
            match cursor.peek() {
                None => break,
                Some(Spanned {
                    token: Token::Semicolon,
                    ..
                }) => {
                    cursor.bump();
                }
                Some(t) => return Err(syntax(t.line, t.column, "expected `;` between relations")),
            }
        }
    }
    Ok(Presentation {
        generators,
        relations,
        normalized: false,
    })
}

// ---------------------------------------------------------------------------
// Normalization

/// One rewriting step performed by [`normalize`]. Generators and relations are
/// referred to by name, since indices shift as generators are eliminated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum TrailStep {
    /// A common factor was cancelled from both sides of a relation.
    Cancelled {
        relation: String,
        generator: String,
        amount: u64,
    },
    /// The relation became `1 = 1` and was dropped.
    DroppedTrivial { relation: String },
    /// A relation `w = 1` forces every generator of `w` to the identity.
    CollapsedToIdentity { relation: String, generators: Vec<String> },
    /// A relation `g = w` was used to substitute `w` for `g`.
    Eliminated { generator: String, replacement: String },
    /// The two relations span a rank-one lattice and were replaced by its
    /// primitive generator.
    DependentReduced { relations: Vec<String>, kept: String },
    /// Generators outside every relation split off as a free factor.
    FreeFactors { generators: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trail {
    pub original_generators: Vec<String>,
    /// Original index of each generator of the normalized presentation.
    pub kept: Vec<usize>,
    pub steps: Vec<TrailStep>,
    /// Set when a step is only valid if the monoid is cancellative
    /// (cancellation, collapse to the identity, or a lattice reduction that
    /// produced a relation not literally present in the input).
    pub conditional: bool,
}

impl Trail {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub presentation: Presentation,
    pub trail: Trail,
}

struct Work<'a> {
    names: &'a [String],
    alive: Vec<bool>,
    relations: Vec<Relation>,
    steps: Vec<TrailStep>,
    conditional: bool,
}

impl Work<'_> {
    fn render(&self, r: &Relation) -> String {
        r.render(self.names)
    }

    fn cancel_common_factors(&mut self) {
        for idx in 0..self.relations.len() {
            let before = self.render(&self.relations[idx]);
            let r = &mut self.relations[idx];
            let shared: Vec<(usize, u64)> = r
                .lhs
                .iter()
                .filter_map(|(g, e)| {
                    let f = r.rhs.exponent(g);
                    (f > 0).then_some((g, e.min(f)))
                })
                .collect();
            for (g, amount) in shared {
                r.lhs.reduce_by(g, amount);
                r.rhs.reduce_by(g, amount);
                self.steps.push(TrailStep::Cancelled {
                    relation: before.clone(),
                    generator: self.names[g].clone(),
                    amount,
                });
                self.conditional = true;
            }
        }
    }

    fn substitute(&mut self, generator: usize, replacement: &Word) -> Result<(), PresentationError> {
        for r in &mut self.relations {
            for side in [&mut r.lhs, &mut r.rhs] {
                let e = side.take(generator);
                if e > 0 {
                    *side = side.checked_mul(&replacement.checked_pow(e)?)?;
                }
            }
        }
        Ok(())
    }

    /// One rewriting step; returns false once nothing applies.
    fn step(&mut self) -> Result<bool, PresentationError> {
        self.cancel_common_factors();

        if let Some(idx) = self.relations.iter().position(|r| r.lhs.is_one() && r.rhs.is_one()) {
            let r = self.relations.remove(idx);
            self.steps.push(TrailStep::DroppedTrivial {
                relation: self.render(&r),
            });
            return Ok(true);
        }

        if let Some(idx) = self.relations.iter().position(|r| r.lhs.is_one() || r.rhs.is_one()) {
            let r = self.relations.remove(idx);
            let side = if r.lhs.is_one() { &r.rhs } else { &r.lhs };
            let gens: Vec<usize> = side.support().into_iter().collect();
            for &g in &gens {
                self.alive[g] = false;
                self.substitute(g, &Word::one())?;
            }
            self.steps.push(TrailStep::CollapsedToIdentity {
                relation: self.render(&r),
                generators: gens.iter().map(|&g| self.names[g].clone()).collect(),
            });
            self.conditional = true;
            return Ok(true);
        }

        let single = self.relations.iter().enumerate().find_map(|(idx, r)| {
            r.lhs
                .as_single_generator()
                .map(|g| (idx, g, r.rhs.clone()))
                .or_else(|| r.rhs.as_single_generator().map(|g| (idx, g, r.lhs.clone())))
        });
        if let Some((idx, g, replacement)) = single {
            self.relations.remove(idx);
            self.alive[g] = false;
            self.substitute(g, &replacement)?;
            self.steps.push(TrailStep::Eliminated {
                generator: self.names[g].clone(),
                replacement: replacement.render(self.names),
            });
            return Ok(true);
        }

        if self.relations.len() == 2 {
            if let Some(reduced) = self.reduce_dependent_pair()? {
                let rendered: Vec<String> = self.relations.iter().map(|r| self.render(r)).collect();
                self.steps.push(TrailStep::DependentReduced {
                    relations: rendered,
                    kept: self.render(&reduced),
                });
                self.relations = vec![reduced];
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// If the difference vectors of the two relations are proportional, the
    /// lattice they span is `Z·c·p` for a primitive `p`; returns the relation
    /// with difference `c·p`, oriented like the first relation.
    fn reduce_dependent_pair(&mut self) -> Result<Option<Relation>, PresentationError> {
        let n = self.names.len();
        let d1 = self.relations[0].difference(n);
        let d2 = self.relations[1].difference(n);
        let proportional = (0..n).all(|i| (i + 1..n).all(|j| d1[i] * d2[j] == d1[j] * d2[i]));
        if !proportional {
            return Ok(None);
        }
        let content = |v: &[i128]| v.iter().fold(0i128, |g, &x| g.gcd(&x));
        let c1 = content(&d1);
        let c2 = content(&d2);
        // d1 = c1·p and d2 = ±c2·p, so Z·d1 + Z·d2 = Z·gcd(c1, c2)·p.
        let c = c1.gcd(&c2);
        let kept = if c == c1 {
            self.relations[0].clone()
        } else if c == c2 {
            // same lattice generator, but keep the orientation of relation 0
            let r = self.relations[1].clone();
            let same_direction = (0..n).any(|i| d1[i] != 0 && (d1[i] > 0) == (d2[i] > 0));
            if same_direction {
                r
            } else {
                r.swapped()
            }
        } else {
            self.conditional = true;
            let mut lhs = Vec::new();
            let mut rhs = Vec::new();
            for (g, &x) in d1.iter().enumerate() {
                let y = x / c1 * c;
                let e = u64::try_from(y.unsigned_abs()).map_err(|_| PresentationError::Overflow)?;
                if y > 0 {
                    lhs.push((g, e));
                } else if y < 0 {
                    rhs.push((g, e));
                }
            }
            Relation::new(Word::from_pairs(lhs), Word::from_pairs(rhs))
        };
        Ok(Some(kept))
    }
}

/// Normalizes a presentation:
///
/// 1. cancels common factors so both sides of each relation have disjoint
///    supports, dropping relations that become `1 = 1` and collapsing
///    generators forced to the identity by a relation `w = 1`;
/// 2. eliminates a generator `g` whenever some relation reads `g = w`,
///    substituting `w` into the other relations;
/// 3. replaces two relations spanning a rank-one lattice by one relation;
/// 4. records generators outside all relations as a free factor.
///
/// Steps 1 and 3 can change a non-cancellative monoid, so the trail is
/// marked conditional when they fire.
pub fn normalize(p: &Presentation) -> Result<Normalized, PresentationError> {
    let mut work = Work {
        names: &p.generators,
        alive: vec![true; p.generators.len()],
        relations: p.relations.clone(),
        steps: Vec::new(),
        conditional: false,
    };
    while work.step()? {}

    if work.relations.len() > 2 {
        return Err(PresentationError::NotSupported {
            count: work.relations.len(),
        });
    }

    let kept: Vec<usize> = (0..p.generators.len()).filter(|&g| work.alive[g]).collect();
    let map: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let relations: Vec<Relation> = work
        .relations
        .iter()
        .map(|r| Relation::new(r.lhs.remap(&map), r.rhs.remap(&map)))
        .collect();
    let presentation = Presentation {
        generators: kept.iter().map(|&g| p.generators[g].clone()).collect(),
        relations,
        normalized: true,
    };

    let mut steps = work.steps;
    let free = presentation.free_generators();
    if !free.is_empty() {
        steps.push(TrailStep::FreeFactors {
            generators: free.iter().map(|&g| presentation.generators[g].clone()).collect(),
        });
    }

    Ok(Normalized {
        presentation,
        trail: Trail {
            original_generators: p.generators.clone(),
            kept,
            steps,
            conditional: work.conditional,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(pairs: &[(usize, u64)]) -> Word {
        Word::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn support_and_hsupp() {
        let a = w(&[(0, 2), (1, 1)]);
        assert_eq!(a.support(), BTreeSet::from([0, 1]));
        assert_eq!(a.hsupp(), BTreeSet::from([0]));
        let b = w(&[(2, 2)]);
        assert_eq!(b.support(), BTreeSet::from([2]));
        assert_eq!(b.hsupp(), BTreeSet::from([2]));
        let c = w(&[(3, 1), (4, 1)]);
        assert!(c.hsupp().is_empty());
        assert!(c.is_squarefree());
        assert_eq!(a.radical(), w(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn parses_file_form() {
        let p = parse_presentation("gens: a b c\nrel: a b = c^2").unwrap();
        assert_eq!(p.generators(), ["a", "b", "c"]);
        assert_eq!(p.relations().len(), 1);
        assert_eq!(p.relations()[0].lhs, w(&[(0, 1), (1, 1)]));
        assert_eq!(p.relations()[0].rhs, w(&[(2, 2)]));
        assert!(!p.is_normalized());
    }

    #[test]
    fn parses_two_relations() {
        let p = parse_presentation("gens: u1 u2 u3 u4 u5\nrel: u1 u2 = u3^2\nrel: u1 u3 = u4 u5").unwrap();
        assert_eq!(p.generator_count(), 5);
        assert_eq!(p.relations().len(), 2);
    }

    #[test]
    fn parses_inline_form() {
        let p = parse_presentation("a b c | a b = c^2 ; a = b").unwrap();
        assert_eq!(p.relations().len(), 2);
        let q = parse_presentation("x y").unwrap();
        assert!(q.relations().is_empty());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_presentation("gens: a\nrel: a = "),
            Err(PresentationError::EmptySide { line: 2, .. })
        ));
        assert!(matches!(
            parse_presentation("gens: a a"),
            Err(PresentationError::DuplicateGenerator { .. })
        ));
        assert!(matches!(
            parse_presentation("gens: a b\nrel: a = z"),
            Err(PresentationError::UnknownGenerator { ref name, line: 2, column: 10 }) if name == "z"
        ));
        assert!(matches!(
            parse_presentation("gens: a b\nrel: a^0 = b"),
            Err(PresentationError::ZeroExponent { line: 2, column: 8 })
        ));
        assert!(matches!(
            parse_presentation("gens: a b\nrel: a b"),
            Err(PresentationError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_presentation("gens: a\nrel: a = a $"),
            Err(PresentationError::Syntax { .. })
        ));
        assert!(matches!(
            parse_presentation("rel: a = b\ngens: a b"),
            Err(PresentationError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn repeated_names_accumulate() {
        let p = parse_presentation("gens: a b\nrel: a a b = b^3").unwrap();
        assert_eq!(p.relations()[0].lhs, w(&[(0, 2), (1, 1)]));
    }

    #[test]
    fn cancellation_then_elimination() {
        let p = parse_presentation("gens: a b\nrel: a^2 b = a b^2").unwrap();
        let n = normalize(&p).unwrap();
        assert_eq!(n.presentation.generators(), ["b"]);
        assert!(n.presentation.relations().is_empty());
        assert!(n.trail.conditional);
        assert!(n.trail.steps.contains(&TrailStep::Eliminated {
            generator: "a".into(),
            replacement: "b".into()
        }));
        assert_eq!(n.trail.kept, vec![1]);
    }

    #[test]
    fn two_relation_example_is_already_normalized() {
        let p = parse_presentation("u1 u2 u3 u4 u5 | u1 u2 = u3^2 ; u1 u3 = u4 u5").unwrap();
        let n = normalize(&p).unwrap();
        assert_eq!(n.presentation.relations(), p.relations());
        assert!(n.trail.is_empty());
        assert!(!n.trail.conditional);
        assert!(n.presentation.is_normalized());
    }

    #[test]
    fn single_generator_side_is_eliminated() {
        let p = parse_presentation("a b c | a b = c").unwrap();
        let n = normalize(&p).unwrap();
        assert_eq!(n.presentation.generators(), ["a", "b"]);
        assert!(n.presentation.relations().is_empty());
        assert_eq!(n.presentation.free_generators(), vec![0, 1]);
        assert!(!n.trail.conditional);
    }

    #[test]
    fn substitution_reaches_other_relation() {
        // c = a b turns c^2 = d into a^2 b^2 = d, which then eliminates d.
        let p = parse_presentation("a b c d | c = a b ; c^2 = d").unwrap();
        let n = normalize(&p).unwrap();
        assert_eq!(n.presentation.generators(), ["a", "b"]);
        assert!(n.presentation.relations().is_empty());
    }

    #[test]
    fn collapse_to_identity() {
        let p = parse_presentation("a b | a b = a").unwrap();
        let n = normalize(&p).unwrap();
        assert_eq!(n.presentation.generators(), ["a"]);
        assert!(n.trail.conditional);
    }

    #[test]
    fn dependent_relations_reduce() {
        // a^2 = b^4 and a^3 = b^6 span the lattice Z·(1, -2).
        let p = parse_presentation("a b | a^2 = b^4 ; a^3 = b^6").unwrap();
        let n = normalize(&p).unwrap();
        assert_eq!(n.presentation.relations().len(), 0, "a = b^2 then eliminates a");
        assert!(n.trail.conditional);

        // an exact multiple keeps the first relation untouched
        let p = parse_presentation("a b c | a b = c^2 ; a^2 b^2 = c^4").unwrap();
        let n = normalize(&p).unwrap();
        assert_eq!(n.presentation.relations(), &p.relations()[..1]);
        assert!(!n.trail.conditional);
    }

    #[test]
    fn too_many_relations() {
        let p = parse_presentation("a b c d e f | a b = c^2 ; c d = e^2 ; e f = a^2").unwrap();
        assert_eq!(normalize(&p), Err(PresentationError::NotSupported { count: 3 }));
    }

    #[test]
    fn text_round_trip() {
        let p = parse_presentation("gens: x y_1 z\nrel: x^3 y_1 = z^2").unwrap();
        assert_eq!(parse_presentation(&p.to_text()).unwrap(), p);
        assert_eq!(parse_presentation(&p.to_inline()).unwrap(), p);
    }
}
