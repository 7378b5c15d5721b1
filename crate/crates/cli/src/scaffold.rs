use std::fmt::Write as _;

use compliance_cards::{AttributeRegistry, CardKind};

/// A card document for `kind` with every applicable attribute set to null,
/// dispositive attributes first, each preceded by one comment line.
pub fn template(registry: &AttributeRegistry, kind: CardKind) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind: {kind}");
    let _ = writeln!(out, "card_id: \"CHANGE-ME\"");
    let _ = writeln!(out, "subject_name: \"\"");
    let _ = writeln!(out, "schema_version: \"{}\"", registry.schema_version());
    out.push_str("attributes:\n");
    for def in registry.for_kind(kind) {
        let refs: Vec<String> = def.articles.iter().map(ToString::to_string).collect();
        let mut comment = String::new();
        if def.dispositive {
            comment.push_str("[dispositive] ");
        }
        comment.push_str(if def.question.is_empty() { &def.category } else { &def.question });
        if let Some(vocab) = def.domain.vocabulary() {
            let _ = write!(comment, " {}: {}", def.domain.name(), vocab.join("|"));
        } else if def.domain == compliance_cards::model::Domain::Level {
            comment.push_str(" level: 0-4");
        } else {
            comment.push_str(" flag: true|false");
        }
        let _ = writeln!(out, "  # {comment} ({})", refs.join(", "));
        let _ = writeln!(out, "  {}: null", def.id);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use compliance_cards::baseline_registry;
    use compliance_cards::io::parse_card;

    #[test]
    fn template_parses_with_everything_unanswered() {
        let reg = baseline_registry();
        for kind in CardKind::ALL {
            let parsed = parse_card(&template(&reg, kind), &reg).unwrap();
            assert_eq!(parsed.card.kind, kind);
            assert_eq!(parsed.card.answered_count(), 0);
            assert!(parsed.warnings.is_empty());
        }
    }

    #[test]
    fn one_comment_per_attribute() {
        let reg = baseline_registry();
        let text = template(&reg, CardKind::Model);
        let comments = text.lines().filter(|l| l.starts_with("  # ")).count();
        assert_eq!(comments, reg.for_kind(CardKind::Model).len());
    }
}
