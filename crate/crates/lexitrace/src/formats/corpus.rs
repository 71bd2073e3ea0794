//! Corpus files:
//!
//! ```json
//! {"id": "GDPR", "title": "...", "articles": [{"number": "13", "title": "...",
//!   "paragraphs": [{"number": "1", "text": "...", "points": [{"letter": "c", "text": "..."}]}]}]}
//! ```
//!
//! Paragraph `text` and `points` may be omitted. Body text is kept
//! verbatim, whitespace included.

use lexitrace_core::corpus::{Article, LegalDocument, Paragraph, Point};
use serde::{Deserialize, Serialize};

use super::{to_json, FormatError};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentFile {
    id: String,
    title: String,
    articles: Vec<ArticleFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArticleFile {
    number: String,
    title: String,
    #[serde(default)]
    paragraphs: Vec<ParagraphFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParagraphFile {
    number: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    text: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    points: Vec<PointFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointFile {
    letter: String,
    text: String,
}

/// Parses and checks a corpus file.
pub fn parse_corpus(input: &str) -> Result<LegalDocument, FormatError> {
    let file: DocumentFile = serde_json::from_str(input)?;
    let doc = LegalDocument {
        id: file.id,
        title: file.title,
        articles: file
            .articles
            .into_iter()
            .map(|a| Article {
                number: a.number,
                title: a.title,
                paragraphs: a
                    .paragraphs
                    .into_iter()
                    .map(|p| Paragraph {
                        number: p.number,
                        text: p.text,
                        points: p.points.into_iter().map(|x| Point { letter: x.letter, text: x.text }).collect(),
                    })
                    .collect(),
            })
            .collect(),
    };
    doc.check()?;
    Ok(doc)
}

pub fn serialize_corpus(doc: &LegalDocument) -> String {
    let file = DocumentFile {
        id: doc.id.clone(),
        title: doc.title.clone(),
        articles: doc
            .articles
            .iter()
            .map(|a| ArticleFile {
                number: a.number.clone(),
                title: a.title.clone(),
                paragraphs: a
                    .paragraphs
                    .iter()
                    .map(|p| ParagraphFile {
                        number: p.number.clone(),
                        text: p.text.clone(),
                        points: p
                            .points
                            .iter()
                            .map(|x| PointFile { letter: x.letter.clone(), text: x.text.clone() })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
    };
    to_json(&file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lexitrace_core::corpus::CorpusError;

    #[test]
    fn empty_document() {
        let doc = parse_corpus(r#"{"id": "GDPR", "title": "t", "articles": []}"#).unwrap();
        assert!(doc.articles.is_empty());
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_corpus("{\"id\": \"GDPR\",\n  \"title\": }").unwrap_err();
        match err {
            FormatError::Syntax { line, column, .. } => assert_eq!((line, column), (2, 12)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_article() {
        let input = r#"{"id": "GDPR", "title": "", "articles": [
            {"number": "4", "title": "a"}, {"number": "4", "title": "b"}]}"#;
        assert!(matches!(parse_corpus(input), Err(FormatError::Corpus(CorpusError::DuplicateArticle(l))) if l == "4"));
    }

    #[test]
    fn empty_id() {
        assert!(matches!(
            parse_corpus(r#"{"id": "", "title": "", "articles": []}"#),
            Err(FormatError::Corpus(CorpusError::EmptyId))
        ));
    }

    #[test]
    fn unknown_field_rejected() {
        assert!(matches!(
            parse_corpus(r#"{"id": "G", "title": "", "articles": [], "extra": 1}"#),
            Err(FormatError::Syntax { .. })
        ));
    }

    #[test]
    fn whitespace_is_preserved() {
        let input = r#"{"id": "G", "title": "", "articles": [{"number": "1", "title": "",
            "paragraphs": [{"number": "1", "text": "  two\tspaces \n"}]}]}"#;
        let doc = parse_corpus(input).unwrap();
        assert_eq!(doc.articles[0].paragraphs[0].text, "  two\tspaces \n");
        assert_eq!(parse_corpus(&serialize_corpus(&doc)).unwrap(), doc);
    }
}
