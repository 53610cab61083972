use std::fmt;

/// An RDF term: an IRI (blank nodes are kept as IRIs with a `_:` prefix) or a literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(String),
    Literal(Literal),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// Unescaped lexical form.
    pub lexical: String,
    pub language: Option<String>,
    pub datatype: Option<String>,
}

impl Term {
    pub fn iri(iri: impl Into<String>) -> Self {
        Term::Iri(iri.into())
    }

    pub fn literal(lexical: impl Into<String>) -> Self {
        Term::Literal(Literal {
            lexical: lexical.into(),
            language: None,
            datatype: None,
        })
    }

    pub fn lang_literal(lexical: impl Into<String>, language: impl Into<String>) -> Self {
        Term::Literal(Literal {
            lexical: lexical.into(),
            language: Some(language.into()),
            datatype: None,
        })
    }

    pub fn typed_literal(lexical: impl Into<String>, datatype: impl Into<String>) -> Self {
        Term::Literal(Literal {
            lexical: lexical.into(),
            language: None,
            datatype: Some(datatype.into()),
        })
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Iri(s) if s.starts_with("_:"))
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(s) => Some(s),
            Term::Literal(_) => None,
        }
    }

    pub fn lexical(&self) -> &str {
        match self {
            Term::Iri(s) => s,
            Term::Literal(l) => &l.lexical,
        }
    }

    /// Token used for this term in walk corpora and embedding vocabularies.
    ///
    /// IRIs map to their bare lexical form; literals keep their N-Triples
    /// quoting so that `"x"` and the IRI `x` never collide.
    pub fn token(&self) -> String {
        match self {
            Term::Iri(s) => s.clone(),
            Term::Literal(_) => self.to_string(),
        }
    }
}

impl fmt::Display for Term {
    /// N-Triples rendering.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(s) if s.starts_with("_:") => f.write_str(s),
            Term::Iri(s) => {
                f.write_str("<")?;
                for c in s.chars() {
                    match c {
                        '>' | '<' | '"' | '{' | '}' | '|' | '^' | '`' | '\\' => {
                            write!(f, "\\u{:04X}", c as u32)?
                        }
                        c if (c as u32) <= 0x20 => write!(f, "\\u{:04X}", c as u32)?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str(">")
            }
            Term::Literal(l) => {
                f.write_str("\"")?;
                for c in l.lexical.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\r' => f.write_str("\\r")?,
                        '\t' => f.write_str("\\t")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")?;
                if let Some(lang) = &l.language {
                    write!(f, "@{lang}")
                } else if let Some(dt) = &l.datatype {
                    write!(f, "^^{}", Term::Iri(dt.clone()))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// One RDF statement. Subject and predicate are always IRIs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Self {
        debug_assert!(subject.is_iri() && predicate.is_iri());
        Triple {
            subject,
            predicate,
            object,
        }
    }

    /// Convenience constructor for IRI-only triples.
    pub fn iris(s: &str, p: &str, o: &str) -> Self {
        Triple::new(Term::iri(s), Term::iri(p), Term::iri(o))
    }

    /// Whether `iri` occurs as subject or object.
    pub fn mentions(&self, iri: &str) -> bool {
        self.subject.as_iri() == Some(iri) || self.object.as_iri() == Some(iri)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
