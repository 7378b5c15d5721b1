use std::fmt;

use serde::de::{self, Deserialize, Deserializer, MapAccess, SeqAccess, Visitor};

/// Loosely-typed document tree as produced by the YAML or JSON parser.
///
/// Mappings keep every entry in source order, duplicates included, so the
/// card reader can report repeated keys instead of silently keeping one.
#[derive(Debug, Clone, PartialEq)]
pub enum RawNode {
    Null,
    Bool(bool),
    Int(i64),
    UInt(u64),
    Float(f64),
    Str(String),
    Seq(Vec<RawNode>),
    Map(Vec<(String, RawNode)>),
}

impl RawNode {
    pub fn type_name(&self) -> &'static str {
        match self {
            RawNode::Null => "null",
            RawNode::Bool(_) => "boolean",
            RawNode::Int(_) | RawNode::UInt(_) => "integer",
            RawNode::Float(_) => "number",
            RawNode::Str(_) => "string",
            RawNode::Seq(_) => "list",
            RawNode::Map(_) => "mapping",
        }
    }

    /// Scalar rendered as a mapping key.
    fn key_string(self) -> Result<String, &'static str> {
        match self {
            RawNode::Null => Ok("null".into()),
            RawNode::Bool(b) => Ok(b.to_string()),
            RawNode::Int(i) => Ok(i.to_string()),
            RawNode::UInt(u) => Ok(u.to_string()),
            RawNode::Float(f) => Ok(f.to_string()),
            RawNode::Str(s) => Ok(s),
            RawNode::Seq(_) | RawNode::Map(_) => Err("mapping keys must be scalars"),
        }
    }

    /// Last-wins conversion to a JSON value (duplicates collapse).
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::Value;
        match self {
            RawNode::Null => Value::Null,
            RawNode::Bool(b) => Value::Bool(*b),
            RawNode::Int(i) => Value::from(*i),
            RawNode::UInt(u) => Value::from(*u),
            RawNode::Float(f) => serde_json::Number::from_f64(*f).map_or(Value::Null, Value::Number),
            RawNode::Str(s) => Value::String(s.clone()),
            RawNode::Seq(items) => Value::Array(items.iter().map(RawNode::to_json).collect()),
            RawNode::Map(entries) => Value::Object(
                entries
                    .iter()
                    .map(|(k, v)| (k.clone(), v.to_json()))
                    .collect(),
            ),
        }
    }

    pub fn from_json(value: &serde_json::Value) -> RawNode {
        use serde_json::Value;
        match value {
            Value::Null => RawNode::Null,
            Value::Bool(b) => RawNode::Bool(*b),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    RawNode::Int(i)
                } else if let Some(u) = n.as_u64() {
                    RawNode::UInt(u)
                } else {
                    RawNode::Float(n.as_f64().unwrap_or(f64::NAN))
                }
            }
            Value::String(s) => RawNode::Str(s.clone()),
            Value::Array(items) => RawNode::Seq(items.iter().map(RawNode::from_json).collect()),
            Value::Object(map) => RawNode::Map(
                map.iter()
                    .map(|(k, v)| (k.clone(), RawNode::from_json(v)))
                    .collect(),
            ),
        }
    }
}

impl<'de> Deserialize<'de> for RawNode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct NodeVisitor;

        impl<'de> Visitor<'de> for NodeVisitor {
            type Value = RawNode;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("any YAML/JSON value")
            }

            fn visit_unit<E: de::Error>(self) -> Result<RawNode, E> {
                Ok(RawNode::Null)
            }

            fn visit_none<E: de::Error>(self) -> Result<RawNode, E> {
                Ok(RawNode::Null)
            }

            fn visit_some<D: Deserializer<'de>>(self, d: D) -> Result<RawNode, D::Error> {
                RawNode::deserialize(d)
            }

            fn visit_bool<E: de::Error>(self, v: bool) -> Result<RawNode, E> {
                Ok(RawNode::Bool(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<RawNode, E> {
                Ok(RawNode::Int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<RawNode, E> {
                Ok(i64::try_from(v).map_or(RawNode::UInt(v), RawNode::Int))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<RawNode, E> {
                Ok(RawNode::Float(v))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<RawNode, E> {
                Ok(RawNode::Str(v.to_owned()))
            }

            fn visit_string<E: de::Error>(self, v: String) -> Result<RawNode, E> {
                Ok(RawNode::Str(v))
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<RawNode, A::Error> {
                let mut items = Vec::new();
                while let Some(item) = seq.next_element()? {
                    items.push(item);
                }
                Ok(RawNode::Seq(items))
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<RawNode, A::Error> {
                let mut entries = Vec::new();
                while let Some((key, value)) = map.next_entry::<RawNode, RawNode>()? {
                    entries.push((key.key_string().map_err(de::Error::custom)?, value));
                }
                Ok(RawNode::Map(entries))
            }
        }

        deserializer.deserialize_any(NodeVisitor)
    }
}
