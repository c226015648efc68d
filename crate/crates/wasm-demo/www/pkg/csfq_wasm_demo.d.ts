/* tslint:disable */
/* eslint-disable */

export class Device {
    free(): void;
    [Symbol.dispose](): void;
    fluxSweep(f_lo: number, f_hi: number, n: number, k: number): Float64Array;
    /**
     * The shipped default device.
     */
    constructor();
    spectroscopy(flux: number, teff: number, order: number, n_points: number): Float64Array;
    /**
     * A device with the given qubit parameters and the default cavity.
     */
    static withQubit(i0_ua: number, alpha: number, cs_ff: number, cj_ff: number): Device;
}

export function t1Curve(t1_base_us: number, t1_ref_us: number, temp_ref: number, lo: number, hi: number, n: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_device_free: (a: number, b: number) => void;
    readonly device_fluxSweep: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly device_new: () => number;
    readonly device_spectroscopy: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly device_withQubit: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly t1Curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
