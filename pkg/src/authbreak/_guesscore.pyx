# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled candidate-password scan.

One loop iteration per candidate: mask-derivation digest, XOR against the
card's masked secret, authenticator digest, compare. Runs on OpenSSL's EVP
digests with the GIL released, so callers can thread-parallelize chunks.
"""

from cpython.bytes cimport PyBytes_AsStringAndSize
from libc.stdlib cimport free, malloc
from libc.string cimport memcmp

cdef extern from "openssl/evp.h":
    ctypedef struct EVP_MD
    ctypedef struct EVP_MD_CTX
    ctypedef struct ENGINE
    ctypedef struct OSSL_LIB_CTX
    # An explicitly fetched MD avoids the per-init implicit fetch (and its
    # global lock) that legacy EVP_get_digestbyname handles incur on 3.x.
    EVP_MD *EVP_MD_fetch(OSSL_LIB_CTX *ctx, const char *algorithm,
                         const char *properties) nogil
    void EVP_MD_free(EVP_MD *md) nogil
    EVP_MD_CTX *EVP_MD_CTX_new() nogil
    void EVP_MD_CTX_free(EVP_MD_CTX *ctx) nogil
    int EVP_DigestInit_ex(EVP_MD_CTX *ctx, const EVP_MD *type, ENGINE *impl) nogil
    int EVP_DigestUpdate(EVP_MD_CTX *ctx, const void *d, size_t cnt) nogil
    int EVP_DigestFinal_ex(EVP_MD_CTX *ctx, unsigned char *md, unsigned int *s) nogil
    enum: EVP_MAX_MD_SIZE

# Digest names as OpenSSL knows them, keyed by the suite's algorithm tag.
OPENSSL_NAMES = {
    "sha256": b"SHA256",
    "sha3-256": b"SHA3-256",
    "blake2s": b"BLAKE2s256",
}


def available_algorithms():
    """Algorithm tags the linked libcrypto can actually serve."""
    cdef EVP_MD *md
    out = []
    for tag, name in OPENSSL_NAMES.items():
        md = EVP_MD_fetch(NULL, name, NULL)
        if md != NULL:
            EVP_MD_free(md)
            out.append(tag)
    return out


def scan_candidates(
    str algorithm,
    int digest_length,
    bytes masked_secret,
    bytes salt,
    bytes target_c1,
    bytes t_u_bytes,
    list candidates,
):
    """Return the index of the first matching candidate, or -1.

    Mirrors the pure-Python scan bit for bit: for each candidate pw the
    derived authenticator is H(0x01 || (l XOR H(0x00 || r || pw)) || t_u),
    truncated to digest_length, compared against the captured value.
    """
    if algorithm not in OPENSSL_NAMES:
        raise ValueError(f"unsupported algorithm {algorithm!r}")
    if not 1 <= digest_length <= EVP_MAX_MD_SIZE:
        raise ValueError("bad digest length")
    if len(masked_secret) != digest_length or len(target_c1) != digest_length:
        raise ValueError("masked secret / target authenticator width mismatch")
    if len(t_u_bytes) != 8:
        raise ValueError("timestamp must be 8 bytes")

    cdef Py_ssize_t n = len(candidates)
    if n == 0:
        return -1

    cdef const unsigned char *l_ptr = masked_secret
    cdef const unsigned char *r_ptr = salt
    cdef const unsigned char *c1_ptr = target_c1
    cdef const unsigned char *tu_ptr = t_u_bytes
    cdef Py_ssize_t r_len = len(salt)
    cdef int dlen = digest_length

    # Borrow candidate buffers up front; the list keeps them alive.
    cdef char **pw_ptrs = <char **>malloc(n * sizeof(char *))
    cdef Py_ssize_t *pw_lens = <Py_ssize_t *>malloc(n * sizeof(Py_ssize_t))
    if pw_ptrs == NULL or pw_lens == NULL:
        free(pw_ptrs)
        free(pw_lens)
        raise MemoryError()

    cdef unsigned char prefix_h = 0x00
    cdef unsigned char prefix_h1 = 0x01
    cdef unsigned char rpw_buf[EVP_MAX_MD_SIZE]
    cdef unsigned char j_buf[EVP_MAX_MD_SIZE]
    cdef unsigned char c_buf[EVP_MAX_MD_SIZE]
    cdef unsigned int out_len
    cdef int k
    cdef int ok = 1
    cdef Py_ssize_t found = -1
    cdef Py_ssize_t i
    cdef EVP_MD *md = NULL
    cdef EVP_MD_CTX *ctx

    try:
        for i in range(n):
            PyBytes_AsStringAndSize(candidates[i], &pw_ptrs[i], &pw_lens[i])

        md = EVP_MD_fetch(NULL, OPENSSL_NAMES[algorithm], NULL)
        if md == NULL:
            raise ValueError(f"libcrypto does not provide {algorithm!r}")

        with nogil:
            ctx = EVP_MD_CTX_new()
            if ctx == NULL:
                ok = 0
            else:
                for i in range(n):
                    if (EVP_DigestInit_ex(ctx, md, NULL) != 1
                            or EVP_DigestUpdate(ctx, &prefix_h, 1) != 1
                            or EVP_DigestUpdate(ctx, r_ptr, r_len) != 1
                            or EVP_DigestUpdate(ctx, pw_ptrs[i], pw_lens[i]) != 1
                            or EVP_DigestFinal_ex(ctx, rpw_buf, &out_len) != 1):
                        ok = 0
                        break
                    for k in range(dlen):
                        j_buf[k] = rpw_buf[k] ^ l_ptr[k]
                    if (EVP_DigestInit_ex(ctx, md, NULL) != 1
                            or EVP_DigestUpdate(ctx, &prefix_h1, 1) != 1
                            or EVP_DigestUpdate(ctx, j_buf, dlen) != 1
                            or EVP_DigestUpdate(ctx, tu_ptr, 8) != 1
                            or EVP_DigestFinal_ex(ctx, c_buf, &out_len) != 1):
                        ok = 0
                        break
                    if memcmp(c_buf, c1_ptr, dlen) == 0:
                        found = i
                        break
                EVP_MD_CTX_free(ctx)
    finally:
        if md != NULL:
            EVP_MD_free(md)
        free(pw_ptrs)
        free(pw_lens)

    if not ok:
        raise RuntimeError("libcrypto digest failure during scan")
    return found
