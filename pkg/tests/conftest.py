import asyncio

import httpx
import pytest

from cantiq.service import create_app


@pytest.fixture(scope="session")
def service_post():
    """POST against an in-process instance of the service."""
    app = create_app()

    def post(path, payload):
        async def go():
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(transport=transport,
                                         base_url="http://test",
                                         timeout=None) as client:
                return await client.post(path, json=payload)

        return asyncio.run(go())

    return post
