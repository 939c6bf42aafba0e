"""HTTP/JSON service for the interactive summarization loop.

Sessions live in memory with TTL eviction. Each session holds one
document, a per-document model (or the shared table model the server was
started with), and a list of iterations; iteration 0 is always the
unconstrained decode.
"""

from __future__ import annotations

import difflib
import threading
import time
import uuid

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .constraints import ConstraintError, ConstraintSet
from .decoding import DecodeConfig, beam_search, dba_decode
from .experiment import train_document_model
from .data import DatasetRecord, DatasetError
from .keyphrases import KpeConfig, extract_keyphrases
from .models import TableModel
from .rouge import rouge_l, rouge_n
from .text import detokenize, split_text

DEFAULT_TTL = 3600.0


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str, detail=None):
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


class CreateSessionRequest(BaseModel):
    document: str
    reference: str | None = None
    beam_size: int | None = None
    max_length: int | None = None
    length_penalty_alpha: float | None = None


class RegenerateRequest(BaseModel):
    constraints: list[str]


class Session:
    def __init__(self, session_id, record, model, config):
        self.session_id = session_id
        self.record = record
        self.model = model
        self.config = config
        self.iterations: list[dict] = []
        self.lock = threading.Lock()
        self.last_access = time.time()

    def touch(self):
        self.last_access = time.time()


def _rouge_payload(candidate_ids, reference_ids) -> dict:
    return {
        "rouge1": round(100 * rouge_n(candidate_ids, reference_ids, 1).f1, 2),
        "rouge2": round(100 * rouge_n(candidate_ids, reference_ids, 2).f1, 2),
        "rougeL": round(100 * rouge_l(candidate_ids, reference_ids).f1, 2),
    }


def _token_diff(old_tokens: list[str], new_tokens: list[str]) -> dict:
    """Added/removed token spans between two summaries."""
    sm = difflib.SequenceMatcher(a=old_tokens, b=new_tokens, autojunk=False)
    added, removed = [], []
    for op, i1, i2, j1, j2 in sm.get_opcodes():
        if op in ("insert", "replace"):
            added.append({"start": j1, "end": j2,
                          "text": " ".join(new_tokens[j1:j2])})
        if op in ("delete", "replace"):
            removed.append({"start": i1, "end": i2,
                            "text": " ".join(old_tokens[i1:i2])})
    return {"added": added, "removed": removed}


def create_app(model_path: str | None = None,
               beam_size: int = 10, max_length: int = 20,
               length_penalty_alpha: float = 1.0,
               ngram_order: int = 3, ngram_lambda: float = 0.1,
               ttl: float = DEFAULT_TTL) -> FastAPI:
    app = FastAPI(title="casdec session service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    shared_table = TableModel.from_json(model_path) if model_path else None
    sessions: dict[str, Session] = {}
    store_lock = threading.Lock()

    @app.exception_handler(ServiceError)
    async def service_error_handler(request: Request, exc: ServiceError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message,
                     "detail": exc.detail},
        )

    def evict_expired():
        now = time.time()
        with store_lock:
            dead = [k for k, s in sessions.items() if now - s.last_access > ttl]
            for k in dead:
                del sessions[k]

    def get_session(session_id: str) -> Session:
        evict_expired()
        with store_lock:
            sess = sessions.get(session_id)
        if sess is None:
            raise ServiceError(404, "session_not_found",
                               f"no session {session_id}")
        sess.touch()
        return sess

    def decode_payload(sess, constraints: ConstraintSet, diff_base=None) -> dict:
        if constraints:
            result = dba_decode(sess.model, constraints, sess.config)
        else:
            result = beam_search(sess.model, sess.config)
        vocab = sess.model.vocab
        content_ids = list(result.tokens[:-1])
        tokens = [vocab.token_of(t) for t in content_ids]
        payload = {
            "index": len(sess.iterations),
            "constraints": constraints.surface_texts(),
            "summary": detokenize(content_ids, vocab),
            "tokens": tokens,
            "satisfied": result.satisfied,
            "fallback_used": result.fallback_used,
            "raw_logprob": result.raw_logprob,
            "normalized_score": result.normalized_score,
            "timestamp": time.time(),
        }
        if sess.record.reference:
            ref_ids = [vocab.id_of(t) for t in split_text(sess.record.reference)]
            payload["rouge"] = _rouge_payload(content_ids, ref_ids)
        if diff_base is not None:
            payload["diff"] = _token_diff(diff_base["tokens"], tokens)
        return payload

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        if not req.document.strip():
            raise ServiceError(400, "empty_document",
                               "document must be nonempty")
        session_id = uuid.uuid4().hex
        config = DecodeConfig(
            beam_size=req.beam_size or beam_size,
            max_length=req.max_length or max_length,
            length_penalty_alpha=(
                length_penalty_alpha
                if req.length_penalty_alpha is None
                else req.length_penalty_alpha
            ),
        )
        try:
            record = DatasetRecord(
                id=session_id,
                document=req.document,
                reference=req.reference or "the",
            )
        except DatasetError as e:
            raise ServiceError(400, "bad_document", str(e))
        record.reference = req.reference or ""
        if shared_table is not None:
            model = shared_table
        else:
            model = train_document_model(record, ngram_order, ngram_lambda)
        sess = Session(session_id, record, model, config)
        iteration = decode_payload(sess, ConstraintSet([]))
        sess.iterations.append(iteration)
        with store_lock:
            sessions[session_id] = sess
        return {"session_id": session_id, "iteration": iteration}

    @app.get("/sessions/{session_id}")
    def get_session_view(session_id: str):
        sess = get_session(session_id)
        return {
            "session_id": session_id,
            "document": sess.record.document,
            "reference": sess.record.reference or None,
            "beam_size": sess.config.beam_size,
            "iterations": sess.iterations,
        }

    @app.get("/sessions/{session_id}/suggestions")
    def suggestions(session_id: str):
        sess = get_session(session_id)
        vocab = sess.model.vocab
        kpe = KpeConfig(min_score=0.0)
        cands = extract_keyphrases(sess.record.document_ids, kpe, vocab)
        s_prime_tokens = sess.iterations[0]["tokens"]
        s_prime = " ".join(s_prime_tokens)
        out = []
        kept = 0
        for cand in cands[:20]:
            text = " ".join(vocab.token_of(t) for t in cand.tokens)
            in_s_prime = f" {text} " in f" {s_prime} "
            filtered_reason = None
            if in_s_prime:
                filtered_reason = "present_in_unconstrained_summary"
            elif kept >= kpe.top_k:
                filtered_reason = "beyond_top_k"
            else:
                kept += 1
            out.append({
                "text": text,
                "score": cand.score,
                "first_position": cand.first_position,
                "in_s_prime": in_s_prime,
                "selected": filtered_reason is None,
                "filtered_reason": filtered_reason,
            })
        return {"suggestions": out}

    @app.post("/sessions/{session_id}/regenerate")
    def regenerate(session_id: str, req: RegenerateRequest):
        sess = get_session(session_id)
        with sess.lock:
            errors = []
            for text in req.constraints:
                try:
                    ConstraintSet.from_texts([text], sess.model.vocab)
                except ConstraintError as e:
                    errors.append({"constraint": text, "error": str(e)})
            if errors:
                raise ServiceError(
                    422, "unrepresentable_constraints",
                    "some constraints cannot be represented",
                    detail=errors,
                )
            constraints = ConstraintSet.from_texts(
                req.constraints, sess.model.vocab
            )
            prev = sess.iterations[-1]
            iteration = decode_payload(sess, constraints, diff_base=prev)
            sess.iterations.append(iteration)
            return {"session_id": session_id, "iteration": iteration}

    @app.get("/sessions/{session_id}/history")
    def history(session_id: str):
        sess = get_session(session_id)
        return {"session_id": session_id, "iterations": sess.iterations}

    return app
