import { readdirSync, statSync } from "fs";
import { join, sep } from "path";

function segmentToRegExp(segment: string): RegExp {
  const escaped = segment.replace(/[.+^${}()|[\]\\]/g, "\\$&").replace(/\*/g, "[^/]*");
  return new RegExp(`^${escaped}$`);
}

/** Expand a glob pattern with `*` wildcards in any path segment; sorted. */
export function expandGlob(pattern: string): string[] {
  const segments = pattern.split(sep === "\\" ? /[\\/]/ : "/");
  let roots: string[] = [segments[0] === "" ? "/" : "."];
  let start = segments[0] === "" ? 1 : 0;
  if (!segments[start]?.includes("*") && segments[0] !== "") {
    // keep literal leading segments joined for relative patterns
    roots = ["."];
  }
  let current: string[] = roots;
  for (let i = start; i < segments.length; i++) {
    const seg = segments[i];
    if (seg === "" || seg === ".") continue;
    const next: string[] = [];
    if (!seg.includes("*")) {
      for (const base of current) {
        const p = base === "." ? seg : join(base, seg);
        try {
          statSync(p);
          next.push(p);
        } catch {
          /* path does not exist; drop */
        }
      }
    } else {
      const re = segmentToRegExp(seg);
      for (const base of current) {
        let entries: string[] = [];
        try {
          entries = readdirSync(base === "." ? "." : base);
        } catch {
          continue;
        }
        for (const e of entries.sort()) {
          if (re.test(e)) next.push(base === "." ? e : join(base, e));
        }
      }
    }
    current = next;
  }
  return current.sort();
}
