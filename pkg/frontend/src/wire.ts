// Typed mirror of the service payloads (docs/wire.md). The client renders
// these verbatim: every order and score on screen is a field from here.

export const SYNTAX_TYPES = [
  "Enumeration",
  "MethodCall",
  "Constant",
  "ClassInstantiation",
  "DefinedVariable",
] as const;

export type SyntaxType = (typeof SYNTAX_TYPES)[number];

export interface Candidate {
  id: string;
  text: string;
  popularity: number;
  placeholders: number;
  free_vars: number;
  syntax_type: SyntaxType;
}

export interface Group {
  id: string;
  description: string;
  declared_type: string;
  holes: string[];
  assigned: string | null;
  enum_constants: string[] | null;
  buckets: Record<SyntaxType, Candidate[]>;
}

export type MatchBadge = "exact" | "root" | "none";

export interface ExampleRef {
  id: string;
  rank: number;
  score: number;
  matches: Record<string, MatchBadge>;
}

export interface SessionPayload {
  id: string;
  pattern_id: string;
  seed: number;
  context: [string, string][];
  complete: boolean;
  fixed: Record<string, string>;
  groups: Group[];
  examples: ExampleRef[];
  example_total: number;
  code: string | null;
}

export interface CodePayload {
  id: string;
  complete: boolean;
  code: string;
}

export interface PatternSummary {
  id: string;
  support: number;
  description: string;
  tokens: string[];
  calls: string[];
  hole_count: number;
  text: string;
}

export interface PatternsPayload {
  patterns: PatternSummary[];
}

export interface ExamplePayload {
  id: string;
  context_params: [string, string][];
  source_uri: string | null;
  text: string;
}

export interface WireError {
  error: string;
  detail: string;
}

export type FillChoice = { candidate: string } | { constant: string };
