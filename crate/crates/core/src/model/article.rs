use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A citation into the AI Act: an article, an annex or a recital, with an
/// optional paragraph/point suffix.
///
/// Written form: `Art. 14(3)(a)`, `Annex XI(2)`, `Rec. 67`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArticleRef {
    pub article: Option<u32>,
    pub annex: Option<String>,
    pub recital: Option<u32>,
    /// Paragraph/point suffix without its outer parentheses, e.g. `3)(a`
    /// is stored as `"3)(a"` and rendered back as `(3)(a)`.
    pub paragraph: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid article reference `{0}` (expected `Art. N`, `Annex X` or `Rec. N`, optionally followed by `(..)` points)")]
pub struct ArticleRefParseError(pub String);

impl ArticleRef {
    pub fn article(number: u32) -> ArticleRef {
        ArticleRef {
            article: Some(number),
            annex: None,
            recital: None,
            paragraph: None,
        }
    }

    pub fn annex(numeral: &str) -> ArticleRef {
        ArticleRef {
            article: None,
            annex: Some(numeral.to_owned()),
            recital: None,
            paragraph: None,
        }
    }

    pub fn recital(number: u32) -> ArticleRef {
        ArticleRef {
            article: None,
            annex: None,
            recital: Some(number),
            paragraph: None,
        }
    }

    pub fn with_paragraph(mut self, paragraph: &str) -> ArticleRef {
        self.paragraph = Some(paragraph.to_owned());
        self
    }

    /// True when this reference is the same provision as `other` or one of its
    /// sub-points (`Art. 14(4)(d)` is within `Art. 14`).
    pub fn is_within(&self, other: &ArticleRef) -> bool {
        if self.article != other.article || self.annex != other.annex || self.recital != other.recital {
            return false;
        }
        match (&self.paragraph, &other.paragraph) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a == b || a.starts_with(&format!("{b})")),
        }
    }
}

impl fmt::Display for ArticleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.article {
            write!(f, "Art. {n}")?;
        } else if let Some(annex) = &self.annex {
            write!(f, "Annex {annex}")?;
        } else if let Some(n) = self.recital {
            write!(f, "Rec. {n}")?;
        }
        if let Some(p) = &self.paragraph {
            write!(f, "({p})")?;
        }
        Ok(())
    }
}

impl FromStr for ArticleRef {
    type Err = ArticleRefParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || ArticleRefParseError(text.to_owned());
        let s = text.trim();
        let (head, rest) = match s.find('(') {
            Some(i) => (&s[..i], Some(&s[i..])),
            None => (s, None),
        };
        let paragraph = match rest {
            None => None,
            Some(r) => {
                let inner = r
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .filter(|inner| !inner.is_empty())
                    .ok_or_else(err)?;
                let balanced = inner.split(")(").all(|part| {
                    !part.is_empty()
                        && part.chars().all(|c| c.is_ascii_alphanumeric())
                });
                if !balanced {
                    return Err(err());
                }
                Some(inner.to_owned())
            }
        };
        let mut out = if let Some(n) = head.strip_prefix("Art.") {
            ArticleRef::article(parse_positive(n.trim()).ok_or_else(err)?)
        } else if let Some(n) = head.strip_prefix("Rec.") {
            ArticleRef::recital(parse_positive(n.trim()).ok_or_else(err)?)
        } else if let Some(numeral) = head.strip_prefix("Annex") {
            let numeral = numeral.trim();
            if numeral.is_empty() || !numeral.chars().all(|c| matches!(c, 'I' | 'V' | 'X' | 'L')) {
                return Err(err());
            }
            ArticleRef::annex(numeral)
        } else {
            return Err(err());
        };
        out.paragraph = paragraph;
        Ok(out)
    }
}

fn parse_positive(s: &str) -> Option<u32> {
    s.parse::<u32>().ok().filter(|n| *n > 0)
}

impl Serialize for ArticleRef {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ArticleRef {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_renders() {
        for text in ["Art. 10", "Art. 14(3)(a)", "Art. 17(1)(f)", "Annex XI(2)", "Annex IV", "Rec. 67", "Art. 53(1)"] {
            let r: ArticleRef = text.parse().unwrap();
            assert_eq!(r.to_string(), text);
        }
        let r: ArticleRef = "Art. 14(4)(d)".parse().unwrap();
        assert_eq!(r.article, Some(14));
        assert_eq!(r.paragraph.as_deref(), Some("4)(d"));
    }

    #[test]
    fn rejects_garbage() {
        for text in ["", "Art.", "Art. 0", "Article 5", "Annex 4", "Art. 5(", "Art. 5()", "Rec. x"] {
            assert!(text.parse::<ArticleRef>().is_err(), "{text}");
        }
    }

    #[test]
    fn containment() {
        let a14: ArticleRef = "Art. 14".parse().unwrap();
        let a14_4d: ArticleRef = "Art. 14(4)(d)".parse().unwrap();
        let a14_4: ArticleRef = "Art. 14(4)".parse().unwrap();
        let a1: ArticleRef = "Art. 1".parse().unwrap();
        assert!(a14_4d.is_within(&a14));
        assert!(a14_4d.is_within(&a14_4));
        assert!(!a14.is_within(&a14_4d));
        assert!(!a14.is_within(&a1));
    }
}
