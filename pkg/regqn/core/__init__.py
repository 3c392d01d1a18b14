# regqn/core/__init__.py
"""
핵심 설정 패키지
설정, 로깅, 예외 정의
"""
