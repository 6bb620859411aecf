//! JSON documents for presentations and groupoids. Opens are arrays of
//! arrays of generator positions (a join of meets), positions referring to
//! the `generators` array of the presentation the open lives in.

use serde::Serialize;

use crate::groupoid::{GeneratorMap, GroupoidPresentation};
use crate::open::{Generator, Open};
use crate::presentation::{FramePresentation, Provenance};

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeneratorJson {
    Rel {
        relation: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        copy: Option<u8>,
        args: Vec<usize>,
    },
    Per {
        sort: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        copy: Option<u8>,
        lhs: usize,
        rhs: usize,
    },
    Iso {
        iso: &'static str,
        sort: String,
        from: usize,
        to: usize,
    },
}

impl From<&Generator> for GeneratorJson {
    fn from(g: &Generator) -> Self {
        match g {
            Generator::Rel { rel, copy, args } => GeneratorJson::Rel {
                relation: rel.to_string(),
                copy: copy.map(|c| c.number()),
                args: args.clone(),
            },
            Generator::Per {
                sort,
                copy,
                lhs,
                rhs,
            } => GeneratorJson::Per {
                sort: sort.to_string(),
                copy: copy.map(|c| c.number()),
                lhs: *lhs,
                rhs: *rhs,
            },
            Generator::Iso {
                tag,
                sort,
                from,
                to,
            } => GeneratorJson::Iso {
                iso: tag.name(),
                sort: sort.to_string(),
                from: *from,
                to: *to,
            },
        }
    }
}

#[derive(Serialize)]
pub struct InequalityJson {
    pub lhs: Vec<Vec<usize>>,
    pub rhs: Vec<Vec<usize>>,
}

#[derive(Serialize)]
pub struct PresentationJson {
    pub provenance: Provenance,
    pub theory: String,
    pub k: usize,
    pub generators: Vec<GeneratorJson>,
    pub inequalities: Vec<InequalityJson>,
}

/// Positions of the generators of `o` in `p`. Generators are assumed to
/// belong to `p`.
pub fn open_refs(p: &FramePresentation, o: &Open) -> Vec<Vec<usize>> {
    o.basics()
        .iter()
        .map(|b| {
            b.generators()
                .iter()
                .map(|g| p.position(g).expect("generator of the presentation"))
                .collect()
        })
        .collect()
}

impl From<&FramePresentation> for PresentationJson {
    fn from(p: &FramePresentation) -> Self {
        PresentationJson {
            provenance: p.provenance(),
            theory: p.theory_name().to_string(),
            k: p.k(),
            generators: p.generators().iter().map(GeneratorJson::from).collect(),
            inequalities: p
                .inequalities()
                .iter()
                .map(|i| InequalityJson {
                    lhs: open_refs(p, &i.lhs),
                    rhs: open_refs(p, &i.rhs),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct MapJson {
    pub domain: Provenance,
    pub codomain: Provenance,
    /// `images[i]` is the image of domain generator `i`, over codomain
    /// generators.
    pub images: Vec<Vec<Vec<usize>>>,
}

impl From<&GeneratorMap> for MapJson {
    fn from(m: &GeneratorMap) -> Self {
        let (dom, cod) = (m.domain(), m.codomain());
        MapJson {
            domain: dom.provenance(),
            codomain: cod.provenance(),
            images: dom
                .generators()
                .iter()
                .map(|g| open_refs(cod, m.image(g).expect("total on generators")))
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct MapsJson {
    pub s: MapJson,
    pub t: MapJson,
    pub e: MapJson,
    pub i: MapJson,
    pub m: MapJson,
    pub pi1: MapJson,
    pub pi2: MapJson,
}

#[derive(Serialize)]
pub struct GroupoidJson {
    pub objects: PresentationJson,
    pub arrows: PresentationJson,
    pub comp: PresentationJson,
    pub maps: MapsJson,
}

impl From<&GroupoidPresentation> for GroupoidJson {
    fn from(g: &GroupoidPresentation) -> Self {
        GroupoidJson {
            objects: g.objects.as_ref().into(),
            arrows: g.arrows.as_ref().into(),
            comp: g.comp.as_ref().into(),
            maps: MapsJson {
                s: (&g.s_star).into(),
                t: (&g.t_star).into(),
                e: (&g.e_star).into(),
                i: (&g.i_star).into(),
                m: (&g.m_star).into(),
                pi1: (&g.pi1_star).into(),
                pi2: (&g.pi2_star).into(),
            },
        }
    }
}

#[derive(Serialize)]
struct PresentationDoc<'a> {
    presentation: &'a PresentationJson,
}

#[derive(Serialize)]
struct GroupoidDoc<'a> {
    groupoid: &'a GroupoidJson,
}

/// `{"presentation": {...}}`, pretty-printed.
pub fn presentation_document(p: &FramePresentation) -> String {
    let body = PresentationJson::from(p);
    serde_json::to_string_pretty(&PresentationDoc {
        presentation: &body,
    })
    .expect("serializable")
}

/// `{"groupoid": {"objects", "arrows", "comp", "maps"}}`, pretty-printed.
pub fn groupoid_document(g: &GroupoidPresentation) -> String {
    let body = GroupoidJson::from(g);
    serde_json::to_string_pretty(&GroupoidDoc { groupoid: &body }).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::groupoid::build_groupoid;
    use crate::presentation::IndexSet;

    #[test]
    fn objects_document() {
        let g = build_groupoid(&corpus::linear_order(), IndexSet::new(2).unwrap()).unwrap();
        let doc: serde_json::Value =
            serde_json::from_str(&presentation_document(&g.objects)).unwrap();
        let p = &doc["presentation"];
        assert_eq!(p["provenance"], "objects");
        assert_eq!(p["k"], 2);
        assert_eq!(p["generators"].as_array().unwrap().len(), 8);
        assert_eq!(p["generators"][0]["kind"], "rel");
        assert_eq!(
            presentation_document(&g.objects),
            presentation_document(&g.objects)
        );
    }

    #[test]
    fn empty_groupoid_document() {
        let t = crate::parse_theory("").unwrap();
        let g = build_groupoid(&t, IndexSet::new(1).unwrap()).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&groupoid_document(&g)).unwrap();
        for which in ["objects", "arrows", "comp"] {
            assert!(doc["groupoid"][which]["generators"]
                .as_array()
                .unwrap()
                .is_empty());
        }
        assert!(doc["groupoid"]["maps"]["m"]["images"]
            .as_array()
            .unwrap()
            .is_empty());
    }
}
