//! Hierarchical legal documents (document, article, paragraph, point),
//! provision references and character spans.
//!
//! Offsets are counted in Unicode scalar values, 0-based, end exclusive.
//! A span always lives inside the body text of a single provision.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegalDocument {
    pub id: String,
    pub title: String,
    pub articles: Vec<Article>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Article {
    pub number: String,
    pub title: String,
    pub paragraphs: Vec<Paragraph>,
}

/// Paragraph body text may be empty when the paragraph only groups points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Paragraph {
    pub number: String,
    pub text: String,
    pub points: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    pub letter: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("document id is empty")]
    EmptyId,
    #[error("document id {0:?} is not a valid identifier (ASCII letters, digits, '-', '_', '.')")]
    InvalidId(String),
    #[error("invalid label {label:?} at {location}")]
    InvalidLabel { location: String, label: String },
    #[error("duplicate article label {0:?}")]
    DuplicateArticle(String),
    #[error("duplicate paragraph label {paragraph:?} in article {article:?}")]
    DuplicateParagraph { article: String, paragraph: String },
    #[error("duplicate point label {point:?} in {paragraph}")]
    DuplicatePoint { paragraph: String, point: String },
    #[error("point {0} has no text")]
    EmptyPoint(String),
}

fn is_id_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.')
}

/// Labels are opaque (`4`, `4a`, `c`) but must be addressable by the
/// reference grammar.
pub fn is_valid_label(label: &str) -> bool {
    !label.is_empty() && label.chars().all(is_id_char)
}

pub fn is_valid_document_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(is_id_char)
}

impl LegalDocument {
    /// Checks the hierarchy invariants: valid id, addressable and unique
    /// labels at every level, non-empty point text.
    pub fn check(&self) -> Result<(), CorpusError> {
        if self.id.is_empty() {
            return Err(CorpusError::EmptyId);
        }
        if !is_valid_document_id(&self.id) {
            return Err(CorpusError::InvalidId(self.id.clone()));
        }
        let mut seen_articles: Vec<&str> = Vec::new();
        for art in &self.articles {
            let art_ref = ProvisionRef::article(&self.id, &art.number);
            if !is_valid_label(&art.number) {
                return Err(CorpusError::InvalidLabel {
                    location: alloc::format!("{}:Art", self.id),
                    label: art.number.clone(),
                });
            }
            if seen_articles.contains(&art.number.as_str()) {
                return Err(CorpusError::DuplicateArticle(art.number.clone()));
            }
            seen_articles.push(&art.number);
            let mut seen_pars: Vec<&str> = Vec::new();
            for par in &art.paragraphs {
                if !is_valid_label(&par.number) {
                    return Err(CorpusError::InvalidLabel { location: art_ref.to_string(), label: par.number.clone() });
                }
                if seen_pars.contains(&par.number.as_str()) {
                    return Err(CorpusError::DuplicateParagraph {
                        article: art.number.clone(),
                        paragraph: par.number.clone(),
                    });
                }
                seen_pars.push(&par.number);
                let par_ref = art_ref.with_paragraph(&par.number);
                let mut seen_points: Vec<&str> = Vec::new();
                for pt in &par.points {
                    if !is_valid_label(&pt.letter) {
                        return Err(CorpusError::InvalidLabel {
                            location: par_ref.to_string(),
                            label: pt.letter.clone(),
                        });
                    }
                    if seen_points.contains(&pt.letter.as_str()) {
                        return Err(CorpusError::DuplicatePoint {
                            paragraph: par_ref.to_string(),
                            point: pt.letter.clone(),
                        });
                    }
                    seen_points.push(&pt.letter);
                    if pt.text.is_empty() {
                        return Err(CorpusError::EmptyPoint(par_ref.with_point(&pt.letter).to_string()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn article(&self, number: &str) -> Option<&Article> {
        self.articles.iter().find(|a| a.number == number)
    }

    /// Looks up the node named by `r`.
    pub fn resolve(&self, r: &ProvisionRef) -> Result<Provision<'_>, ResolveError> {
        if r.document != self.id {
            return Err(ResolveError::DocumentMismatch { expected: self.id.clone(), found: r.document.clone() });
        }
        let art = self.article(&r.article).ok_or_else(|| ResolveError::UnknownArticle(r.clone()))?;
        let Some(par_label) = &r.paragraph else {
            return Ok(Provision::Article(art));
        };
        let par = art
            .paragraphs
            .iter()
            .find(|p| &p.number == par_label)
            .ok_or_else(|| ResolveError::UnknownParagraph(r.clone()))?;
        let Some(pt_label) = &r.point else {
            return Ok(Provision::Paragraph(par));
        };
        par.points
            .iter()
            .find(|p| &p.letter == pt_label)
            .map(Provision::Point)
            .ok_or_else(|| ResolveError::UnknownPoint(r.clone()))
    }

    /// Returns the scalar-value substring `[start, end)` of the span's
    /// provision body text.
    pub fn slice(&self, span: &Span) -> Result<&str, SliceError> {
        let node = self.resolve(&span.provision)?;
        let body = node.body_text().ok_or_else(|| SliceError::NoBodyText(span.provision.clone()))?;
        slice_chars(body, span.start, span.end).ok_or_else(|| SliceError::OutOfBounds {
            provision: span.provision.clone(),
            start: span.start,
            end: span.end,
            len: body.chars().count(),
        })
    }

    /// Every article, every paragraph that carries body text and every
    /// point, in depth-first document order.
    pub fn list_provisions(&self) -> Vec<ProvisionRef> {
        let mut out = Vec::new();
        for art in &self.articles {
            let art_ref = ProvisionRef::article(&self.id, &art.number);
            out.push(art_ref.clone());
            for par in &art.paragraphs {
                let par_ref = art_ref.with_paragraph(&par.number);
                if !par.text.is_empty() {
                    out.push(par_ref.clone());
                }
                out.extend(par.points.iter().map(|pt| par_ref.with_point(&pt.letter)));
            }
        }
        out
    }

    /// The subset of [`list_provisions`](Self::list_provisions) that carries
    /// body text, i.e. the provisions a span can point into.
    pub fn text_provisions(&self) -> Vec<ProvisionRef> {
        self.list_provisions().into_iter().filter(|r| r.paragraph.is_some()).collect()
    }
}

/// Substring by scalar-value offsets. `None` when out of bounds or inverted.
pub fn slice_chars(text: &str, start: usize, end: usize) -> Option<&str> {
    if start > end {
        return None;
    }
    let mut indices = text.char_indices().map(|(i, _)| i).chain(core::iter::once(text.len()));
    let from = indices.nth(start)?;
    let to = if end == start { from } else { indices.nth(end - start - 1)? };
    Some(&text[from..to])
}

/// Length in Unicode scalar values.
pub fn char_len(text: &str) -> usize {
    text.chars().count()
}

/// A resolved node of the document tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provision<'a> {
    Article(&'a Article),
    Paragraph(&'a Paragraph),
    Point(&'a Point),
}

impl<'a> Provision<'a> {
    /// Body text, if the node carries any. Articles never do.
    pub fn body_text(&self) -> Option<&'a str> {
        match self {
            Provision::Article(_) => None,
            Provision::Paragraph(p) if p.text.is_empty() => None,
            Provision::Paragraph(p) => Some(&p.text),
            Provision::Point(p) => Some(&p.text),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolveError {
    #[error("reference names document {found:?} but the corpus is {expected:?}")]
    DocumentMismatch { expected: String, found: String },
    #[error("unknown article in {0}")]
    UnknownArticle(ProvisionRef),
    #[error("unknown paragraph in {0}")]
    UnknownParagraph(ProvisionRef),
    #[error("unknown point in {0}")]
    UnknownPoint(ProvisionRef),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SliceError {
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error("{0} has no body text")]
    NoBodyText(ProvisionRef),
    #[error("span [{start}, {end}) is out of bounds for {provision} (length {len})")]
    OutOfBounds { provision: ProvisionRef, start: usize, end: usize, len: usize },
}

/// Address of an article, paragraph or point: `DOC:ArtN`, `DOC:ArtN(P)`,
/// `DOC:ArtN(P)(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProvisionRef {
    pub document: String,
    pub article: String,
    pub paragraph: Option<String>,
    pub point: Option<String>,
}

impl ProvisionRef {
    pub fn article(document: &str, article: &str) -> Self {
        ProvisionRef { document: document.to_string(), article: article.to_string(), paragraph: None, point: None }
    }

    /// Panics if `self` already names a point.
    pub fn with_paragraph(&self, paragraph: &str) -> Self {
        assert!(self.point.is_none());
        ProvisionRef { paragraph: Some(paragraph.to_string()), ..self.clone() }
    }

    /// Panics if `self` names no paragraph.
    pub fn with_point(&self, point: &str) -> Self {
        assert!(self.paragraph.is_some(), "point reference needs a paragraph");
        ProvisionRef { point: Some(point.to_string()), ..self.clone() }
    }

    /// True if `other` is `self` or lies below it in the hierarchy.
    pub fn contains(&self, other: &ProvisionRef) -> bool {
        if self.document != other.document || self.article != other.article {
            return false;
        }
        match (&self.paragraph, &other.paragraph) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) if a != b => false,
            (Some(_), Some(_)) => match (&self.point, &other.point) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(a), Some(b)) => a == b,
            },
        }
    }
}

impl fmt::Display for ProvisionRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:Art{}", self.document, self.article)?;
        if let Some(p) = &self.paragraph {
            write!(f, "({p})")?;
        }
        if let Some(x) = &self.point {
            write!(f, "({x})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed provision reference {input:?}: {reason}")]
pub struct ParseRefError {
    pub input: String,
    pub reason: &'static str,
}

impl FromStr for ProvisionRef {
    type Err = ParseRefError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseRefError { input: s.to_string(), reason };
        let (doc, rest) = s.split_once(':').ok_or_else(|| err("missing ':'"))?;
        if !is_valid_document_id(doc) {
            return Err(err("invalid document id"));
        }
        let rest = rest.strip_prefix("Art").ok_or_else(|| err("expected 'Art'"))?;
        let label_end = rest.find('(').unwrap_or(rest.len());
        let article = &rest[..label_end];
        if !is_valid_label(article) {
            return Err(err("invalid article label"));
        }
        let mut tail = &rest[label_end..];
        let mut labels: Vec<&str> = Vec::new();
        while !tail.is_empty() {
            let inner = tail.strip_prefix('(').ok_or_else(|| err("expected '('"))?;
            let close = inner.find(')').ok_or_else(|| err("unclosed '('"))?;
            let label = &inner[..close];
            if !is_valid_label(label) {
                return Err(err("invalid paragraph or point label"));
            }
            labels.push(label);
            tail = &inner[close + 1..];
        }
        if labels.len() > 2 {
            return Err(err("too many levels"));
        }
        Ok(ProvisionRef {
            document: doc.to_string(),
            article: article.to_string(),
            paragraph: labels.first().map(|l| l.to_string()),
            point: labels.get(1).map(|l| l.to_string()),
        })
    }
}

/// Compares labels so that numeric runs sort by value: `2 < 4 < 4a < 13`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let mut xs = a.chars().peekable();
    let mut ys = b.chars().peekable();
    loop {
        match (xs.peek().copied(), ys.peek().copied()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let mut nx = String::new();
                while let Some(c) = xs.peek().copied().filter(char::is_ascii_digit) {
                    nx.push(c);
                    xs.next();
                }
                let mut ny = String::new();
                while let Some(c) = ys.peek().copied().filter(char::is_ascii_digit) {
                    ny.push(c);
                    ys.next();
                }
                let tx = nx.trim_start_matches('0');
                let ty = ny.trim_start_matches('0');
                let ord = tx.len().cmp(&ty.len()).then_with(|| tx.cmp(ty)).then_with(|| nx.len().cmp(&ny.len()));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(&y);
                }
                xs.next();
                ys.next();
            }
        }
    }
}

fn cmp_opt_label(a: &Option<String>, b: &Option<String>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => natural_cmp(x, y),
    }
}

/// Depth-first order within a document (parents before children, numeric
/// labels by value). Matches document order for conventionally numbered
/// texts; use [`LegalDocument::list_provisions`] for the authoritative order.
impl Ord for ProvisionRef {
    fn cmp(&self, other: &Self) -> Ordering {
        self.document
            .cmp(&other.document)
            .then_with(|| natural_cmp(&self.article, &other.article))
            .then_with(|| cmp_opt_label(&self.paragraph, &other.paragraph))
            .then_with(|| cmp_opt_label(&self.point, &other.point))
    }
}

impl PartialOrd for ProvisionRef {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A character range inside one provision's body text.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Span {
    pub provision: ProvisionRef,
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(provision: ProvisionRef, start: usize, end: usize) -> Self {
        Span { provision, start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of shared characters; 0 across different provisions.
    pub fn overlap(&self, other: &Span) -> usize {
        if self.provision != other.provision {
            return 0;
        }
        let lo = self.start.max(other.start);
        let hi = self.end.min(other.end);
        hi.saturating_sub(lo)
    }
}
