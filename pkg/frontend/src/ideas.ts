import type { Heuristic, IdeaDraftBody, StimulusKind } from "./types.js";

export interface IdeaFormInput {
  heuristic: string;
  stimulusText: string;
  stimulusKind: string;
  sourceField: string;
  targetQuery: string;
  ideaText: string;
}

const HEURISTICS: readonly string[] = ["combination", "analogy"];
const STIMULUS_KINDS: readonly string[] = ["term", "document", "field"];

/** Inline validation; a non-empty result means no request is sent. */
export function validateIdeaForm(form: IdeaFormInput): string[] {
  const errors: string[] = [];
  if (!HEURISTICS.includes(form.heuristic)) errors.push("choose a heuristic");
  if (!STIMULUS_KINDS.includes(form.stimulusKind)) errors.push("choose a stimulus kind");
  if (!form.stimulusText.trim()) errors.push("stimulus text is required");
  if (!form.sourceField.trim()) errors.push("source field is required");
  if (!form.targetQuery.trim()) errors.push("position a query first");
  if (!form.ideaText.trim()) errors.push("idea text is required");
  return errors;
}

export function toDraftBody(form: IdeaFormInput): IdeaDraftBody {
  return {
    heuristic: form.heuristic as Heuristic,
    stimulus_text: form.stimulusText,
    stimulus_kind: form.stimulusKind as StimulusKind,
    source_field: form.sourceField,
    target_query: form.targetQuery,
    idea_text: form.ideaText,
  };
}
