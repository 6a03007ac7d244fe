"""Voxelsmith: an interactive voxel-house build agent whose command language
users can extend by defining new commands in terms of known ones."""

from .config import Config, load_config
from .errors import (
    DefinitionSyntaxError,
    EmptyGridError,
    ExpansionCycleError,
    ExpansionDepthError,
    OccupiedError,
    OutOfBoundsError,
    PendingHintError,
    SchematicError,
    SelfReferenceError,
    SnapshotError,
    StoreError,
    UnsupportedLabelError,
    VoxelsmithError,
)
from .generation import (
    ConstraintSet,
    GenerationResult,
    GeneratorContext,
    GeneratorParams,
    NeedsHint,
    OffsetFrequencyModel,
    PlacementStep,
    ProceduralModel,
    Prompt,
    StopReason,
    cursor_location,
    fit_offset_model,
    generate,
    load_offset_params,
    procedural_next_step,
    resolve_length,
    resolve_location,
    save_offset_params,
)
from .grammar import (
    BuildCommand,
    CommandAst,
    Conversational,
    DefineCommand,
    DestroyCommand,
    Relation,
    RelLoc,
    SizeWord,
    Unparsable,
    Utterance,
    format_definition,
    is_definition,
    parse_core,
    parse_definition,
    tokenize,
    word_count,
)
from .naturalize import (
    DefinitionEntry,
    DefinitionStore,
    HashedEmbedder,
    cosine,
    define,
    embed,
    expand,
    load_store,
    lookup,
    save_store,
    seed_store,
)
from .session import (
    AgentReply,
    Classification,
    Exchange,
    PendingBuild,
    Resolution,
    SessionLog,
    SessionState,
    cancel_pending,
    classify_exchange,
    create_session,
    handle_utterance,
    load_log,
    provide_hint,
    restore,
    save_log,
    snapshot,
)
from .metrics import (
    CurvePoint,
    TransferReport,
    TransferRow,
    expressiveness,
    expressiveness_curve,
    naturalization_curve,
    transfer_report,
)
from .world import (
    BlockType,
    Cell,
    Coord,
    Ray,
    SegmentInstance,
    SegmentLabel,
    VoxelGrid,
    bounding_box,
    load_house,
    place_block,
    raycast,
    remove_blocks,
    save_house,
    segment,
)

__version__ = "0.1.0"
