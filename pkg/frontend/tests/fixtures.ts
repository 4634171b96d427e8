// Recorded responses from a live `accessgraph serve` session analyzing
// samples/memory-tablet-phone.json. The contract tests render these
// verbatim; if the service changes shape, re-record rather than edit.

import type {
  AnalyzeResponse,
  GraphDocument,
  TemplateManifest,
  WhatIfResponse,
} from "../src/api.js";

export const exampleDocument = {
  "nodes": [
    {
      "id": "acct",
      "kind": "account",
      "label": "Account"
    },
    {
      "id": "ways-in",
      "kind": "operator",
      "label": "Ways in",
      "op": "or"
    },
    {
      "id": "pw-and-factor",
      "kind": "operator",
      "label": "Password with factor",
      "op": "and"
    },
    {
      "id": "password",
      "kind": "auth_method",
      "label": "Password",
      "category": "knowledge_based"
    },
    {
      "id": "factor",
      "kind": "auth_method",
      "label": "Stored factor",
      "category": "software_based"
    },
    {
      "id": "sms",
      "kind": "auth_method",
      "label": "SMS code",
      "category": "software_based"
    },
    {
      "id": "memory",
      "kind": "access_method",
      "label": "Memory"
    },
    {
      "id": "tablet",
      "kind": "access_method",
      "label": "Tablet"
    },
    {
      "id": "phone",
      "kind": "access_method",
      "label": "Phone"
    }
  ],
  "edges": [
    [
      "acct",
      "ways-in"
    ],
    [
      "ways-in",
      "pw-and-factor"
    ],
    [
      "pw-and-factor",
      "password"
    ],
    [
      "pw-and-factor",
      "factor"
    ],
    [
      "ways-in",
      "sms"
    ],
    [
      "password",
      "memory"
    ],
    [
      "factor",
      "tablet"
    ],
    [
      "factor",
      "phone"
    ],
    [
      "sms",
      "phone"
    ]
  ],
  "roots": [
    "acct"
  ]
} as GraphDocument;

export const analyzeFixture = {
  "revision": 1,
  "accounts": [
    {
      "account": "acct",
      "label": "Account",
      "security": "medium",
      "security_band": "yellow",
      "formula": "(Memory ∧ (Tablet ∨ Phone)) ∨ Phone",
      "reduced_formula": "(Memory ∧ Tablet) ∨ Phone",
      "accessibility": {
        "score": "2",
        "score_decimal": 2.0,
        "band": "yellow",
        "satisfiable": true,
        "reduced_term": [
          [
            "memory",
            "tablet"
          ],
          [
            "phone"
          ]
        ],
        "lockout_sets": [
          [
            "memory",
            "phone"
          ],
          [
            "phone",
            "tablet"
          ]
        ],
        "occurrences": {
          "memory": 1,
          "tablet": 1,
          "phone": 1
        },
        "weights": {
          "memory": "1",
          "tablet": "1",
          "phone": "1"
        },
        "safe_loss_bound": 1,
        "safe_loss_bound_fractional": false,
        "narrative": "Access to Account might be lost when losing both Phone and Tablet, or losing your Phone and forgetting your password"
      },
      "legacy_accessibility": {
        "score": "3/2",
        "score_decimal": 1.5,
        "label": "legacy (reconstructed)"
      }
    }
  ]
} as AnalyzeResponse;

export const whatIfPhoneFixture = {
  "revision": 1,
  "account": "acct",
  "lost": [
    "phone"
  ],
  "accessible": true,
  "score": "1",
  "score_decimal": 1.0,
  "band": "red",
  "reduced_term": [
    [
      "memory",
      "tablet"
    ]
  ],
  "lockout_sets": [
    [
      "memory"
    ],
    [
      "tablet"
    ]
  ]
} as WhatIfResponse;

export const whatIfAllFixture = {
  "revision": 1,
  "account": "acct",
  "lost": [
    "phone",
    "tablet"
  ],
  "accessible": false,
  "score": "0",
  "score_decimal": 0.0,
  "band": "red",
  "reduced_term": [],
  "lockout_sets": []
} as WhatIfResponse;

export const googleTemplateFixture = {
  "provider": "google",
  "device_categories": [
    "phone",
    "computer_laptop",
    "tablet",
    "smart_watch",
    "security_key"
  ],
  "record": {
    "provider": "google",
    "devices": [],
    "password_access": {
      "memory": false,
      "password_manager": false,
      "browser_devices": [],
      "paper": false
    },
    "google": {
      "mfa_enabled": false,
      "prompts": [],
      "authenticator_app": [],
      "backup_codes": false,
      "voice_text": [],
      "security_key": [],
      "sign_in_by_phone": [],
      "recovery_phone": null,
      "recovery_email": false
    },
    "apple": null
  },
  "fields": [
    {
      "path": "password_access.memory",
      "kind": "bool",
      "label": "Password memorized"
    },
    {
      "path": "password_access.password_manager",
      "kind": "bool",
      "label": "Password in a password manager"
    },
    {
      "path": "password_access.browser_devices",
      "kind": "device_ids",
      "label": "Password stored in a browser on"
    },
    {
      "path": "password_access.paper",
      "kind": "bool",
      "label": "Password on paper"
    },
    {
      "path": "google.mfa_enabled",
      "kind": "bool",
      "label": "2-step verification"
    },
    {
      "path": "google.prompts",
      "kind": "device_ids",
      "label": "Google prompts on"
    },
    {
      "path": "google.authenticator_app",
      "kind": "device_ids",
      "label": "Authenticator app on"
    },
    {
      "path": "google.backup_codes",
      "kind": "bool",
      "label": "Backup codes"
    },
    {
      "path": "google.voice_text",
      "kind": "device_ids",
      "label": "Voice or text message to",
      "categories": [
        "phone"
      ]
    },
    {
      "path": "google.security_key",
      "kind": "device_ids",
      "label": "Security key",
      "categories": [
        "security_key"
      ]
    },
    {
      "path": "google.sign_in_by_phone",
      "kind": "device_ids",
      "label": "Sign in by phone on",
      "categories": [
        "phone"
      ]
    },
    {
      "path": "google.recovery_phone",
      "kind": "device_id",
      "label": "Recovery phone",
      "categories": [
        "phone"
      ]
    },
    {
      "path": "google.recovery_email",
      "kind": "bool",
      "label": "Recovery email"
    }
  ]
} as TemplateManifest;
