import { describe, expect, it } from "vitest";

import {
  ApiClient,
  ProtectedWordError,
  RevisionConflictError,
} from "../src/api.js";
import { fixture, scriptedFetch } from "./helpers.js";

describe("ApiClient", () => {
  it("parses project state", async () => {
    const payload = fixture("get_initial");
    const fetch = scriptedFetch([
      { method: "GET", path: `/projects/${payload.id}`, body: payload },
    ]);
    const client = new ApiClient("", fetch);
    const got = await client.getProject(payload.id);
    expect(got.revision).toBe(payload.revision);
    expect(got.gaps.length).toBeGreaterThan(0);
    expect(fetch.remaining()).toBe(0);
  });

  it("maps 409 to RevisionConflictError", async () => {
    const fetch = scriptedFetch([
      {
        method: "PUT",
        path: "/projects/p/descriptions/d2",
        status: 409,
        asDetail: true,
        body: { error: "revision-conflict", current: 7, base: 5 },
      },
    ]);
    const client = new ApiClient("", fetch);
    await expect(
      client.editDescription("p", "d2", 5, { anchor_time: 1 }),
    ).rejects.toBeInstanceOf(RevisionConflictError);
  });

  it("maps protected-phrase rejections with their span", async () => {
    const rejection = fixture("toggle_d5_protected");
    const fetch = scriptedFetch([
      {
        method: "POST",
        path: "/projects/p/descriptions/d5/toggle-word",
        status: rejection.status,
        body: rejection.body,
      },
    ]);
    const client = new ApiClient("", fetch);
    try {
      await client.toggleWord("p", "d5", 3, 2);
      expect.unreachable("toggle should reject");
    } catch (err) {
      expect(err).toBeInstanceOf(ProtectedWordError);
      const info = (err as ProtectedWordError).info;
      expect(info.span).toEqual(rejection.body.detail.span);
      expect(info.message).toBe(rejection.body.detail.message);
    }
  });

  it("sends base_revision on mutations", async () => {
    let seenBody: any;
    const client = new ApiClient("", async (url, init) => {
      seenBody = JSON.parse(String(init?.body));
      return new Response(JSON.stringify(fixture("toggle_d2_word1")), { status: 200 });
    });
    await client.toggleWord("p", "d2", 41, 1);
    expect(seenBody).toEqual({ base_revision: 41, word_index: 1 });
  });
});
