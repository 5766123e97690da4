from copy import deepcopy
from typing import Annotated, Any, Optional

from pydantic import BaseModel, ConfigDict, Field, create_model
from pydantic.fields import FieldInfo


def partial_model[M: BaseModel](model: type[M]) -> type[BaseModel]:
    """Same fields as `model`, every one optional and defaulting to None."""

    def make_field_optional(field: FieldInfo, default: Any = None) -> tuple[Any, FieldInfo]:
        new = deepcopy(field)
        # constraints and discriminators apply to the inner type, not to None
        inner = Annotated[field.annotation, *field.metadata] if field.metadata else field.annotation
        if field.discriminator is not None:
            inner = Annotated[inner, Field(discriminator=field.discriminator)]
            new.discriminator = None
        new.metadata = []
        new.default = default
        new.default_factory = None
        new.annotation = Optional[inner]  # type: ignore
        return new.annotation, new

    return create_model(
        f"Partial{model.__name__}",
        __config__=ConfigDict(extra="forbid", populate_by_name=True),
        __module__=model.__module__,
        **{field_name: make_field_optional(field_info) for field_name, field_info in model.model_fields.items()},
    )


def merge_partial[M: BaseModel](base: M, partial: BaseModel) -> M:
    """Overlay the fields set on `partial` onto `base` and re-validate."""
    update = partial.model_dump(exclude_unset=True, exclude_none=True)
    merged = base.model_dump() | update
    return type(base).model_validate(merged)
