//! Every SemIoE class and property name the vocabulary must expose.

pub const CLASSES: &[&str] = &[
    "Activity",
    "Agent",
    "AgentRelation",
    "Collaboration",
    "CurrentRole",
    "Delegation",
    "HAgent",
    "Preference",
    "Process",
    "Right",
    "RightOnEnvironment",
    "RightOnSmartObject",
    "RightOnSystem",
    "RightType",
    "Site",
    "SmartObject",
    "System",
    "WorkflowElement",
];
pub const OBJECT_PROPERTIES: &[&str] = &[
    "engagedIn",
    "forRole",
    "forWorkflowElement",
    "fromAgent",
    "hasType",
    "includedIn",
    "locatedIn",
    "onEnvironment",
    "onObject",
    "onSmartObject",
    "onSystem",
    "toAgent",
];
pub const DATA_PROPERTIES: &[&str] = &[
    "endTime",
    "hasPreferenceValue",
    "isTransferable",
    "startTime",
];
