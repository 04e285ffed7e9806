/* tslint:disable */
/* eslint-disable */

/**
 * Exact best attack of size at most `l` against a pure defense.
 */
export function best_response(graph: string, defense: string, l: number): string;

/**
 * Payoffs of a pure defense against a pure attack.
 */
export function evaluate_payoff(graph: string, defense: string, attack: string): string;

/**
 * Mixed value with equilibrium strategies via double oracle.
 */
export function game_value(graph: string, k: number, l: number): string;

/**
 * Seeded instance of one of the generator families.
 */
export function generate_graph(kind: string, n: number, seed: bigint): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly best_response: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly evaluate_payoff: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly game_value: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly generate_graph: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
