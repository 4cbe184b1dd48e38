/**
 * Single-page wizard: walk the server's questionnaire, commit the new
 * entry, then inspect the generated paradigm and live analyses.
 *
 * The server is the single source of truth. Every form, tag, prompt and
 * label shown here is a payload string echoed verbatim; back-navigation
 * truncates the local answer trail and replays it through a fresh session.
 */

import {
  AnalysesPayload,
  ApiClient,
  FormsPayload,
  InferredPayload,
  QuestionPayload,
} from "./api.js";

export interface TrailStep {
  question: QuestionPayload;
  key: string;
  label: string;
}

interface WizardError {
  message: string;
  retry: () => void;
}

export class Wizard {
  sessionId: string | null = null;
  trail: TrailStep[] = [];
  current: QuestionPayload | null = null;
  inferred: InferredPayload | null = null;
  entryId: string | null = null;
  preview: FormsPayload | null = null;
  analyses: AnalysesPayload | null = null;
  error: WizardError | null = null;

  lemmaValue = "";
  prefixValue = "";
  glossValue = "";
  alternantValues: Record<string, string> = {};
  analyzeValue = "";
  commitError: string | null = null;

  constructor(
    readonly root: HTMLElement,
    readonly api: ApiClient,
  ) {}

  async start(): Promise<void> {
    await this.guard("start", async () => {
      const created = await this.api.createSession();
      this.sessionId = created.session_id;
      this.current = created.question;
      this.trail = [];
      this.inferred = null;
    });
  }

  async choose(key: string): Promise<void> {
    await this.guard(`choose:${key}`, async () => {
      if (!this.sessionId || !this.current) {
        throw new Error("no active question");
      }
      const question = this.current;
      const option = question.answers.find((a) => a.key === key);
      const response = await this.api.answer(this.sessionId, key);
      this.trail.push({ question, key, label: option ? option.label : key });
      if (response.inferred) {
        this.inferred = response.inferred;
        this.current = null;
      } else {
        this.current = response.question ?? null;
      }
    });
  }

  /** Truncate the trail and replay it through a fresh server session. */
  async backTo(index: number): Promise<void> {
    await this.guard(`back:${index}`, async () => {
      const replay = this.trail.slice(0, index);
      const created = await this.api.createSession();
      this.sessionId = created.session_id;
      this.current = created.question;
      this.trail = [];
      this.inferred = null;
      this.entryId = null;
      this.preview = null;
      this.analyses = null;
      for (const step of replay) {
        const response = await this.api.answer(this.sessionId, step.key);
        this.trail.push(step);
        if (response.inferred) {
          this.inferred = response.inferred;
          this.current = null;
        } else {
          this.current = response.question ?? null;
        }
      }
    });
  }

  async commit(): Promise<void> {
    await this.guard("commit", async () => {
      if (!this.sessionId || !this.inferred) {
        throw new Error("nothing to commit");
      }
      this.commitError = null;
      const alternants: Record<string, string> = {};
      for (const name of this.inferred.required_alternants) {
        alternants[name] = this.alternantValues[name] ?? "";
      }
      try {
        const committed = await this.api.commit(this.sessionId, {
          lemma: this.lemmaValue,
          alternants,
          prefix: this.prefixValue || undefined,
          gloss: this.glossValue || undefined,
        });
        this.entryId = committed.entry_id;
      } catch (err) {
        // Validation problems (duplicate entry, bad lemma) stay inline.
        this.commitError = err instanceof Error ? err.message : String(err);
        return;
      }
      this.preview = await this.api.generate(
        this.lemmaValue,
        this.inferred.pos,
      );
    });
  }

  async analyzeForm(form: string): Promise<void> {
    await this.guard(`analyze:${form}`, async () => {
      this.analyzeValue = form;
      this.analyses = await this.api.analyze(form);
    });
  }

  /** Run a step; a failure becomes a retry affordance, state untouched. */
  private async guard(label: string, step: () => Promise<void>): Promise<void> {
    try {
      this.error = null;
      await step();
    } catch (err) {
      const message = err instanceof Error ? err.message : String(err);
      this.error = {
        message: `${label} failed: ${message}`,
        retry: () => void this.guard(label, step).then(() => this.render()),
      };
    }
    this.render();
  }

  // --- rendering -----------------------------------------------------------

  render(): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = "";
    const el = (
      tagName: string,
      attrs: Record<string, string>,
      text?: string,
    ): HTMLElement => {
      const node = doc.createElement(tagName);
      for (const [k, v] of Object.entries(attrs)) {
        node.setAttribute(k, v);
      }
      if (text !== undefined) {
        node.textContent = text;
      }
      return node;
    };

    const title = el("h1", {}, "morphkit — neues Wort aufnehmen");
    this.root.appendChild(title);

    if (this.error) {
      const banner = el("div", { "data-testid": "error-banner" });
      banner.appendChild(el("span", {}, this.error.message));
      const retry = el("button", { "data-testid": "retry" }, "Wiederholen");
      retry.addEventListener("click", () => this.error?.retry());
      banner.appendChild(retry);
      this.root.appendChild(banner);
    }

    if (this.trail.length > 0) {
      const list = el("ol", { "data-testid": "trail" });
      this.trail.forEach((step, i) => {
        const item = el("li", { "data-testid": "trail-item" });
        item.appendChild(
          el("span", {}, `${step.question.prompt} — ${step.label}`),
        );
        const back = el(
          "button",
          { "data-testid": `back-${i}` },
          "ändern",
        );
        back.addEventListener("click", () => void this.backTo(i));
        item.appendChild(back);
        list.appendChild(item);
      });
      this.root.appendChild(list);
    }

    if (this.current) {
      const panel = el("section", { "data-testid": "question" });
      panel.appendChild(
        el("p", { "data-testid": "question-prompt" }, this.current.prompt),
      );
      for (const option of this.current.answers) {
        const button = el(
          "button",
          { "data-testid": `answer-${option.key}` },
          option.label,
        );
        button.addEventListener("click", () => void this.choose(option.key));
        panel.appendChild(button);
      }
      this.root.appendChild(panel);
    }

    if (this.inferred && !this.entryId) {
      const panel = el("section", { "data-testid": "inferred" });
      panel.appendChild(
        el(
          "p",
          {},
          "Erkannte Wortklasse: ",
        ),
      );
      panel.appendChild(
        el("code", { "data-testid": "inferred-pos" }, this.inferred.pos),
      );
      panel.appendChild(
        el(
          "code",
          { "data-testid": "inferred-paradigm" },
          this.inferred.paradigm_id,
        ),
      );
      const lemma = el("input", {
        "data-testid": "lemma-input",
        placeholder: "Grundform",
      }) as HTMLInputElement;
      lemma.value = this.lemmaValue;
      lemma.addEventListener("input", () => {
        this.lemmaValue = lemma.value;
      });
      panel.appendChild(lemma);
      for (const name of this.inferred.required_alternants) {
        const input = el("input", {
          "data-testid": `alternant-${name}`,
          placeholder: name,
        }) as HTMLInputElement;
        input.value = this.alternantValues[name] ?? "";
        input.addEventListener("input", () => {
          this.alternantValues[name] = input.value;
        });
        panel.appendChild(input);
      }
      const commit = el("button", { "data-testid": "commit" }, "Aufnehmen");
      commit.addEventListener("click", () => void this.commit());
      panel.appendChild(commit);
      if (this.commitError) {
        panel.appendChild(
          el("p", { "data-testid": "commit-error" }, this.commitError),
        );
      }
      this.root.appendChild(panel);
    }

    if (this.entryId) {
      const panel = el("section", { "data-testid": "confirmation" });
      panel.appendChild(el("p", {}, "Eintrag angelegt: "));
      panel.appendChild(
        el("code", { "data-testid": "entry-id" }, this.entryId),
      );
      if (this.preview) {
        const table = el("table", { "data-testid": "preview-table" });
        for (const row of this.preview.forms) {
          const tr = el("tr", { "data-testid": "preview-row" });
          tr.appendChild(el("td", { "data-testid": "preview-form" }, row.form));
          tr.appendChild(el("td", { "data-testid": "preview-tag" }, row.tag));
          table.appendChild(tr);
        }
        panel.appendChild(table);
      }
      const analyzeInput = el("input", {
        "data-testid": "analyze-input",
        placeholder: "Wortform analysieren",
      }) as HTMLInputElement;
      analyzeInput.value = this.analyzeValue;
      analyzeInput.addEventListener("input", () => {
        this.analyzeValue = analyzeInput.value;
      });
      panel.appendChild(analyzeInput);
      const run = el("button", { "data-testid": "analyze-run" }, "Analysieren");
      run.addEventListener("click", () =>
        void this.analyzeForm(analyzeInput.value),
      );
      panel.appendChild(run);
      if (this.analyses) {
        const table = el("table", { "data-testid": "analyze-table" });
        for (const reading of this.analyses.analyses) {
          const tr = el("tr", { "data-testid": "analyze-row" });
          tr.appendChild(
            el("td", { "data-testid": "analyze-lemma" }, reading.lemma),
          );
          tr.appendChild(
            el("td", { "data-testid": "analyze-tag" }, reading.tag),
          );
          tr.appendChild(
            el(
              "td",
              { "data-testid": "analyze-provenance" },
              reading.provenance,
            ),
          );
          table.appendChild(tr);
        }
        panel.appendChild(table);
      }
      this.root.appendChild(panel);
    }
  }
}
