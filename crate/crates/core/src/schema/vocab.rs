//! IRI constants for the SemIoE bridge vocabulary and the imported
//! vocabularies it aligns with.

macro_rules! namespace {
    ($(#[$meta:meta])* $module:ident = $ns:literal { $($name:ident = $local:literal),* $(,)? }) => {
        $(#[$meta])*
        pub mod $module {
            pub const NS: &str = $ns;
            $(pub const $name: &str = concat!($ns, $local);)*
        }
    };
}

namespace!(rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#" {
    TYPE = "type",
    LANG_STRING = "langString",
});

namespace!(rdfs = "http://www.w3.org/2000/01/rdf-schema#" {
    SUB_CLASS_OF = "subClassOf",
    SUB_PROPERTY_OF = "subPropertyOf",
    DOMAIN = "domain",
    RANGE = "range",
    LABEL = "label",
    COMMENT = "comment",
});

namespace!(owl = "http://www.w3.org/2002/07/owl#" {
    ONTOLOGY = "Ontology",
    CLASS = "Class",
    OBJECT_PROPERTY = "ObjectProperty",
    DATATYPE_PROPERTY = "DatatypeProperty",
});

namespace!(xsd = "http://www.w3.org/2001/XMLSchema#" {
    STRING = "string",
    BOOLEAN = "boolean",
    INTEGER = "integer",
    DECIMAL = "decimal",
    DATE_TIME = "dateTime",
});

namespace!(foaf = "http://xmlns.com/foaf/0.1/" {
    AGENT = "Agent",
});

namespace!(ssn = "http://www.w3.org/ns/ssn/" {
    SYSTEM = "System",
    PROPERTY = "Property",
    HAS_SUB_SYSTEM = "hasSubSystem",
    HAS_PROPERTY = "hasProperty",
});

namespace!(ssn_system = "http://www.w3.org/ns/ssn/systems/" {
    SYSTEM_CAPABILITY = "SystemCapability",
});

namespace!(sosa = "http://www.w3.org/ns/sosa/" {
    SENSOR = "Sensor",
    ACTUATOR = "Actuator",
});

namespace!(bot = "https://w3id.org/bot#" {
    ZONE = "Zone",
    SITE = "Site",
});

namespace!(org = "http://www.w3.org/ns/org#" {
    SITE = "Site",
    ROLE = "Role",
    MEMBERSHIP = "Membership",
    MEMBER = "member",
    ROLE_PROP = "role",
});

namespace!(
    /// The bridge ontology.
    ioe = "http://w3id.org/semioe#" {
    AGENT = "Agent",
    H_AGENT = "HAgent",
    SMART_OBJECT = "SmartObject",
    SYSTEM = "System",
    SITE = "Site",
    ACTIVITY = "Activity",
    PROCESS = "Process",
    WORKFLOW_ELEMENT = "WorkflowElement",
    RIGHT = "Right",
    RIGHT_TYPE = "RightType",
    RIGHT_ON_SYSTEM = "RightOnSystem",
    RIGHT_ON_SMART_OBJECT = "RightOnSmartObject",
    RIGHT_ON_ENVIRONMENT = "RightOnEnvironment",
    CURRENT_ROLE = "CurrentRole",
    PREFERENCE = "Preference",
    AGENT_RELATION = "AgentRelation",
    COLLABORATION = "Collaboration",
    DELEGATION = "Delegation",

    LOCATED_IN = "locatedIn",
    ENGAGED_IN = "engagedIn",
    INCLUDED_IN = "includedIn",
    ON_SYSTEM = "onSystem",
    ON_OBJECT = "onObject",
    ON_SMART_OBJECT = "onSmartObject",
    ON_ENVIRONMENT = "onEnvironment",
    FOR_ROLE = "forRole",
    HAS_TYPE = "hasType",
    FROM_AGENT = "fromAgent",
    TO_AGENT = "toAgent",
    FOR_WORKFLOW_ELEMENT = "forWorkflowElement",

    HAS_PREFERENCE_VALUE = "hasPreferenceValue",
    START_TIME = "startTime",
    END_TIME = "endTime",
    IS_TRANSFERABLE = "isTransferable",

    // Extensions minted by this implementation.
    HAS_PREFERENCE = "hasPreference",
    FOR_PROPERTY = "forProperty",
    FOR_SITE = "forSite",
    HAS_CURRENT_VALUE = "hasCurrentValue",
    LAST_SET_BY = "lastSetBy",
    RETIRED_AT = "retiredAt",
});

/// Default namespace bound to the empty prefix for instance data.
pub const DEFAULT_INSTANCE_NS: &str = "http://w3id.org/semioe/data#";

/// Prefix bindings every document and query may use without declaring them.
pub const STANDARD_PREFIXES: &[(&str, &str)] = &[
    ("bot", bot::NS),
    ("foaf", foaf::NS),
    ("ioe", ioe::NS),
    ("org", org::NS),
    ("owl", owl::NS),
    ("rdf", rdf::NS),
    ("rdfs", rdfs::NS),
    ("sosa", sosa::NS),
    ("ssn", ssn::NS),
    ("ssn-system", ssn_system::NS),
    ("xsd", xsd::NS),
];
